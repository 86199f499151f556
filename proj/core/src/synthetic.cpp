#include <algorithm>
#include <cmath>

#include "texnoise/error.hpp"
#include "texnoise/harness.hpp"
#include "texnoise/random.hpp"

namespace texnoise::harness {

Dataset synthetic_gratings(const SyntheticSpec& spec) {
  if (spec.classes < 2 || spec.per_class < 2) {
    throw Error(Errc::kInvalidArgument, "synthetic corpus needs >= 2 classes and >= 2 images per class");
  }
  if (spec.width < 3 || spec.height < 3) throw Error(Errc::kInvalidArgument, "synthetic images must be at least 3x3");
  if (!(spec.period > 0.0) || !(spec.amplitude >= 0.0 && spec.amplitude <= 0.5)) {
    throw Error(Errc::kInvalidArgument, "grating period must be positive and amplitude within [0, 0.5]");
  }
  constexpr double kPi = 3.14159265358979323846;
  std::mt19937_64 engine(mix64(spec.seed));
  Dataset data;
  data.manifest.width = spec.width;
  data.manifest.height = spec.height;
  const int digits = static_cast<int>(std::to_string(std::max(spec.classes, spec.per_class) - 1).size());
  const auto padded = [digits](int v) {
    std::string s = std::to_string(v);
    return std::string(static_cast<std::size_t>(std::max(0, digits - static_cast<int>(s.size()))), '0') + s;
  };

  for (int c = 0; c < spec.classes; ++c) {
    Subject subject{"class" + padded(c), {}};
    const double theta = kPi * c / spec.classes;
    const double kx = 2.0 * kPi * std::cos(theta) / spec.period;
    const double ky = 2.0 * kPi * std::sin(theta) / spec.period;
    for (int i = 0; i < spec.per_class; ++i) {
      const double phase = 2.0 * kPi * uniform01(engine);
      std::vector<double> pixels(static_cast<std::size_t>(spec.width) * spec.height);
      for (int y = 0; y < spec.height; ++y) {
        for (int x = 0; x < spec.width; ++x) {
          pixels[static_cast<std::size_t>(y) * spec.width + x] = 0.5 + spec.amplitude * std::sin(kx * x + ky * y + phase);
        }
      }
      std::string rel = subject.name + "/img" + padded(i) + ".pgm";
      subject.relative_paths.push_back(rel);
      data.samples.push_back({std::move(rel), c, imaging::GrayImage(spec.width, spec.height, std::move(pixels))});
    }
    data.manifest.subjects.push_back(std::move(subject));
  }
  return data;
}

}  // namespace texnoise::harness
