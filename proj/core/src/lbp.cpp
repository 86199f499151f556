#include <cmath>
#include <numbers>
#include <string>

#include "texnoise/descriptors.hpp"
#include "texnoise/error.hpp"
#include "texnoise/lbp_sampler.hpp"

namespace texnoise::descriptors {

void LbpParams::validate() const {
  if (samples < 4 || samples > 24) {
    throw Error(Errc::kInvalidArgument, "LBP sample count must be in [4, 24]");
  }
  if (!(radius >= 1.0) || !std::isfinite(radius)) {
    throw Error(Errc::kInvalidArgument, "LBP radius must be >= 1");
  }
}

int LbpParams::margin() const { return static_cast<int>(std::ceil(radius)); }

namespace detail {

CircularSampler::CircularSampler(const LbpParams& params) {
  params.validate();
  margin_ = params.margin();
  points_.reserve(static_cast<std::size_t>(params.samples));
  if (params.uses_integer_neighbours()) {
    static constexpr int kDx[8] = {1, 1, 0, -1, -1, -1, 0, 1};
    static constexpr int kDy[8] = {0, -1, -1, -1, 0, 1, 1, 1};
    for (int p = 0; p < 8; ++p) points_.push_back({kDx[p], kDy[p], 0.0, 0.0, 0.0});
    return;
  }
  constexpr double kSnap = 1e-9;
  // Bilinear weights are irrational off the axes (cos and sin of the same
  // diagonal even differ in the last bit), so a neighbour that exactly equals
  // the center in real arithmetic can come out a few ulps low.
  constexpr double kTieSlack = 1e-9;
  for (int p = 0; p < params.samples; ++p) {
    const double angle = 2.0 * std::numbers::pi * p / params.samples;
    double ox = params.radius * std::cos(angle);
    double oy = -params.radius * std::sin(angle);
    if (std::abs(ox - std::round(ox)) < kSnap) ox = std::round(ox);
    if (std::abs(oy - std::round(oy)) < kSnap) oy = std::round(oy);
    const double fx0 = std::floor(ox);
    const double fy0 = std::floor(oy);
    const bool on_grid = ox == fx0 && oy == fy0;
    points_.push_back({static_cast<int>(fx0), static_cast<int>(fy0), ox - fx0, oy - fy0, on_grid ? 0.0 : kTieSlack});
  }
}

}  // namespace detail

namespace {

void require_center(const GrayImage& img, int cx, int cy, int margin) {
  if (cx < margin || cy < margin || cx > img.width() - 1 - margin || cy > img.height() - 1 - margin) {
    throw Error(Errc::kBorderViolation, "center (" + std::to_string(cx) + ", " + std::to_string(cy) +
                                            ") is closer than " + std::to_string(margin) +
                                            " pixels to the border");
  }
}

}  // namespace

std::vector<double> sample_circular(const GrayImage& img, int cx, int cy, const LbpParams& params) {
  const detail::CircularSampler sampler(params);
  require_center(img, cx, cy, sampler.margin());
  const double* center = img.intensities().data() + static_cast<std::size_t>(cy) * img.width() + cx;
  std::vector<double> out;
  out.reserve(sampler.points().size());
  for (const auto& point : sampler.points()) out.push_back(point.sample(center, img.width()));
  return out;
}

std::uint32_t lbp_code(const GrayImage& img, int cx, int cy, const LbpParams& params) {
  const detail::CircularSampler sampler(params);
  require_center(img, cx, cy, sampler.margin());
  const double* center = img.intensities().data() + static_cast<std::size_t>(cy) * img.width() + cx;
  return sampler.code(center, img.width());
}

std::vector<std::uint64_t> lbp_counts(const GrayImage& img, const LbpParams& params) {
  const detail::CircularSampler sampler(params);
  const int m = sampler.margin();
  if (img.width() <= 2 * m || img.height() <= 2 * m) {
    throw Error(Errc::kImageTooSmall, "image too small for LBP radius " + std::to_string(params.radius));
  }
  std::vector<std::uint64_t> counts(std::size_t{1} << params.samples, 0);
  const int w = img.width();
  const double* data = img.intensities().data();
  for (int y = m; y < img.height() - m; ++y) {
    const double* row = data + static_cast<std::size_t>(y) * w;
    for (int x = m; x < w - m; ++x) ++counts[sampler.code(row + x, w)];
  }
  return counts;
}

FeatureVector lbp_histogram(const GrayImage& img, const LbpParams& params) {
  return normalize_counts(lbp_counts(img, params), descriptor_id(params));
}

}  // namespace texnoise::descriptors
