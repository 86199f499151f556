#include <algorithm>
#include <cmath>

#include "texnoise/error.hpp"
#include "texnoise/imaging.hpp"
#include "texnoise/random.hpp"

namespace texnoise::imaging {

namespace {

void require_level(const NoiseSpec& spec) {
  if (!(spec.level >= 0.0) || !std::isfinite(spec.level)) {
    throw Error(Errc::kInvalidArgument, "noise level must be finite and nonnegative");
  }
}

}  // namespace

std::vector<double> gaussian_noise_field(std::size_t count, const NoiseSpec& spec) {
  require_level(spec);
  const double sigma = spec.scale == NoiseScale::kVariance ? std::sqrt(spec.level) : spec.level;
  NormalSampler normal(spec.seed);
  std::vector<double> field(count);
  for (double& g : field) g = sigma * normal();
  return field;
}

GrayImage add_gaussian_noise(const GrayImage& img, const NoiseSpec& spec) {
  require_level(spec);
  if (spec.level == 0.0) return img;
  std::vector<double> out = gaussian_noise_field(img.intensities().size(), spec);
  const auto in = img.intensities();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::clamp(in[i] + out[i], 0.0, 1.0);
  return GrayImage(img.width(), img.height(), std::move(out));
}

}  // namespace texnoise::imaging
