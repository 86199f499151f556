#include "texnoise/error.hpp"
#include "texnoise/imaging.hpp"

#ifdef TEXNOISE_HAVE_PNG
#include <png.h>

#include <cstring>
#endif

namespace texnoise::imaging {

#ifdef TEXNOISE_HAVE_PNG

bool png_supported() noexcept { return true; }

GrayImage load_png(std::span<const std::uint8_t> bytes) {
  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;

  if (!png_image_begin_read_from_memory(&image, bytes.data(), bytes.size())) {
    const std::string message = image.message;
    png_image_free(&image);
    throw Error(Errc::kDecodeFailure, "PNG decode failed: " + message);
  }
  if ((image.format & PNG_FORMAT_FLAG_COLOR) != 0 || (image.format & PNG_FORMAT_FLAG_LINEAR) != 0) {
    png_image_free(&image);
    throw Error(Errc::kUnsupportedFormat, "only 8-bit grayscale PNG is supported");
  }

  // Alpha, if any, is dropped; palette-free gray stays unchanged.
  image.format = PNG_FORMAT_GRAY;
  std::vector<std::uint8_t> raster(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, raster.data(), 0, nullptr)) {
    const std::string message = image.message;
    png_image_free(&image);
    throw Error(Errc::kTruncatedPayload, "PNG decode failed: " + message);
  }

  std::vector<double> values(raster.size());
  for (std::size_t i = 0; i < raster.size(); ++i) values[i] = raster[i] / 255.0;
  return GrayImage(static_cast<int>(image.width), static_cast<int>(image.height), std::move(values));
}

#else

bool png_supported() noexcept { return false; }

GrayImage load_png(std::span<const std::uint8_t>) {
  throw Error(Errc::kUnsupportedFormat, "PNG support was not compiled in");
}

#endif

}  // namespace texnoise::imaging
