#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>

#include "texnoise/error.hpp"
#include "texnoise/imaging.hpp"

namespace texnoise::imaging {

GrayImage::GrayImage(int width, int height, double fill)
    : GrayImage(width, height,
                std::vector<double>(static_cast<std::size_t>(std::max(width, 0)) *
                                        static_cast<std::size_t>(std::max(height, 0)),
                                    fill)) {}

GrayImage::GrayImage(int width, int height, std::vector<double> intensities)
    : width_(width), height_(height), intensities_(std::move(intensities)) {
  if (width < 1 || height < 1) {
    throw Error(Errc::kInvalidArgument, "image dimensions must be positive");
  }
  if (intensities_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
    throw Error(Errc::kInvalidArgument, "intensity count does not match width x height");
  }
  for (const double v : intensities_) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw Error(Errc::kInvalidArgument, "intensity outside [0, 1]");
    }
  }
}

Bytes read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::kIo, "cannot open " + path.string());
  Bytes bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw Error(Errc::kIo, "read failed: " + path.string());
  return bytes;
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::kIo, "cannot open for writing: " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(Errc::kIo, "write failed: " + path.string());
}

GrayImage load_image(std::span<const std::uint8_t> bytes) {
  static constexpr std::uint8_t kPngSignature[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
  if (bytes.size() >= 8 && std::equal(std::begin(kPngSignature), std::end(kPngSignature), bytes.begin())) {
    return load_png(bytes);
  }
  return load_pgm(bytes);
}

GrayImage resize_bilinear(const GrayImage& img, int out_width, int out_height) {
  if (out_width < 1 || out_height < 1) {
    throw Error(Errc::kInvalidArgument, "resize target dimensions must be positive");
  }
  if (img.empty()) throw Error(Errc::kInvalidArgument, "cannot resize an empty image");

  const int in_w = img.width();
  const int in_h = img.height();
  std::vector<double> out(static_cast<std::size_t>(out_width) * static_cast<std::size_t>(out_height));
  // A single output column/row samples the first source column/row.
  for (int y = 0; y < out_height; ++y) {
    // Multiply-then-divide keeps same-size resizes exact.
    const double src_y = out_height > 1 ? static_cast<double>(y) * (in_h - 1) / (out_height - 1) : 0.0;
    const int y0 = std::min(static_cast<int>(std::floor(src_y)), in_h - 1);
    const int y1 = std::min(y0 + 1, in_h - 1);
    const double fy = src_y - y0;
    for (int x = 0; x < out_width; ++x) {
      const double src_x = out_width > 1 ? static_cast<double>(x) * (in_w - 1) / (out_width - 1) : 0.0;
      const int x0 = std::min(static_cast<int>(std::floor(src_x)), in_w - 1);
      const int x1 = std::min(x0 + 1, in_w - 1);
      const double fx = src_x - x0;
      const double top = img.at(x0, y0) + fx * (img.at(x1, y0) - img.at(x0, y0));
      const double bottom = img.at(x0, y1) + fx * (img.at(x1, y1) - img.at(x0, y1));
      const double v = top + fy * (bottom - top);
      out[static_cast<std::size_t>(y) * out_width + x] = std::clamp(v, 0.0, 1.0);
    }
  }
  return GrayImage(out_width, out_height, std::move(out));
}

GrayImage quantize_8bit(const GrayImage& img) {
  std::vector<double> out(img.intensities().begin(), img.intensities().end());
  for (double& v : out) v = std::round(v * 255.0) / 255.0;
  return GrayImage(img.width(), img.height(), std::move(out));
}

}  // namespace texnoise::imaging
