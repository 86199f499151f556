#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "texnoise/descriptors.hpp"

namespace texnoise::descriptors::detail {

// One neighbour of the circular pattern, expressed relative to the center as
// an integer cell offset plus the fractional position inside that cell.
struct SamplePoint {
  int dx = 0;
  int dy = 0;
  double fx = 0.0;
  double fy = 0.0;
  // How far below the center an interpolated value may land and still count
  // as a tie. Zero for points that read a pixel directly.
  double slack = 0.0;

  // `center` points at the center pixel inside a row-major buffer of `stride`.
  // Lerp form is exact on constant neighbourhoods; on-grid axes skip the far
  // read so radius-R points never touch pixels beyond ceil(R).
  double sample(const double* center, int stride) const noexcept {
    const double* p = center + static_cast<std::ptrdiff_t>(dy) * stride + dx;
    const double v00 = p[0];
    if (fx == 0.0 && fy == 0.0) return v00;
    if (fy == 0.0) return v00 + fx * (p[1] - v00);
    if (fx == 0.0) return v00 + fy * (p[stride] - v00);
    const double top = v00 + fx * (p[1] - v00);
    const double bottom = p[stride] + fx * (p[stride + 1] - p[stride]);
    return top + fy * (bottom - top);
  }
};

// Precomputed neighbourhood geometry shared by lbp_code and the histogram loop,
// so both produce identical codes.
class CircularSampler {
 public:
  explicit CircularSampler(const LbpParams& params);

  int margin() const noexcept { return margin_; }
  const std::vector<SamplePoint>& points() const noexcept { return points_; }

  std::uint32_t code(const double* center, int stride) const noexcept {
    const double c = *center;
    std::uint32_t code = 0;
    for (std::size_t p = 0; p < points_.size(); ++p) {
      if (points_[p].sample(center, stride) >= c - points_[p].slack) code |= std::uint32_t{1} << p;
    }
    return code;
  }

 private:
  std::vector<SamplePoint> points_;
  int margin_ = 1;
};

}  // namespace texnoise::descriptors::detail
