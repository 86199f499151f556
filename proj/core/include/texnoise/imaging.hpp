#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace texnoise::imaging {

/// Row-major grayscale image with intensities in [0, 1].
///
/// The constructor enforces the invariants (size matches, every value finite
/// and inside [0, 1]); after that the image is immutable. Operations that
/// produce images build a fresh buffer and hand it over.
class GrayImage {
 public:
  GrayImage() = default;
  GrayImage(int width, int height, double fill = 0.0);
  GrayImage(int width, int height, std::vector<double> intensities);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  bool empty() const noexcept { return intensities_.empty(); }

  double at(int x, int y) const noexcept {
    return intensities_[static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
                        static_cast<std::size_t>(x)];
  }
  std::span<const double> row(int y) const noexcept {
    return {intensities_.data() + static_cast<std::size_t>(y) * static_cast<std::size_t>(width_),
            static_cast<std::size_t>(width_)};
  }
  std::span<const double> intensities() const noexcept { return intensities_; }

  friend bool operator==(const GrayImage&, const GrayImage&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<double> intensities_;
};

/// How `NoiseSpec::level` is read. Variance is the default convention.
enum class NoiseScale { kVariance, kStdDev };

struct NoiseSpec {
  double level = 0.0;
  std::uint64_t seed = 0;
  NoiseScale scale = NoiseScale::kVariance;
};

using Bytes = std::vector<std::uint8_t>;

/// Decodes a binary "P5" PGM with maxval <= 255. Intensities are raw / maxval.
GrayImage load_pgm(std::span<const std::uint8_t> bytes);

/// Encodes as binary P5, maxval 255, round(v * 255).
Bytes save_pgm(const GrayImage& img);

/// Decodes an 8-bit grayscale PNG. Throws kUnsupportedFormat when the library
/// was built without libpng or the file is color / 16-bit.
GrayImage load_png(std::span<const std::uint8_t> bytes);

bool png_supported() noexcept;

/// Dispatches on the magic bytes (PGM or PNG).
GrayImage load_image(std::span<const std::uint8_t> bytes);

Bytes read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

/// Corner-aligned bilinear resampling: output pixel i maps to source coordinate
/// i * (in - 1) / (out - 1), so the four corners coincide.
GrayImage resize_bilinear(const GrayImage& img, int out_width, int out_height);

/// The `count` deviates add_gaussian_noise draws for `spec`, before clamping.
/// Standard deviation sqrt(level) (kVariance) or level (kStdDev).
std::vector<double> gaussian_noise_field(std::size_t count, const NoiseSpec& spec);

/// out = clamp(in + g, 0, 1) with g = gaussian_noise_field(pixels, spec).
/// Level 0 returns the input unchanged.
GrayImage add_gaussian_noise(const GrayImage& img, const NoiseSpec& spec);

/// Rounds every intensity to the nearest multiple of 1/255.
GrayImage quantize_8bit(const GrayImage& img);

}  // namespace texnoise::imaging
