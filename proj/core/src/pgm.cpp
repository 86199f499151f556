#include <cctype>
#include <cmath>
#include <string>

#include "texnoise/error.hpp"
#include "texnoise/imaging.hpp"

namespace texnoise::imaging {
namespace {

class HeaderReader {
 public:
  explicit HeaderReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  // Skips whitespace and '#' comments, then reads a decimal field.
  long long next_field(const char* what) {
    skip_separators();
    if (pos_ >= bytes_.size()) {
      throw Error(Errc::kMalformedHeader, std::string("PGM header ends before ") + what);
    }
    if (!std::isdigit(bytes_[pos_])) {
      throw Error(Errc::kMalformedHeader, std::string("PGM header: expected digits for ") + what);
    }
    long long value = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      value = value * 10 + (bytes_[pos_] - '0');
      if (value > 1'000'000'000LL) {
        throw Error(Errc::kMalformedHeader, std::string("PGM header: ") + what + " out of range");
      }
      ++pos_;
    }
    return value;
  }

  // Exactly one whitespace byte separates maxval from the raster.
  void consume_single_whitespace() {
    if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_])) {
      throw Error(Errc::kMalformedHeader, "PGM header: missing whitespace after maxval");
    }
    ++pos_;
  }

  std::size_t position() const noexcept { return pos_; }

 private:
  void skip_separators() {
    while (pos_ < bytes_.size()) {
      if (std::isspace(bytes_[pos_])) {
        ++pos_;
      } else if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n' && bytes_[pos_] != '\r') ++pos_;
      } else {
        break;
      }
    }
  }

  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 2;
};

}  // namespace

GrayImage load_pgm(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P') {
    throw Error(Errc::kUnsupportedMagic, "not a PNM file (missing 'P' magic)");
  }
  if (bytes[1] != '5') {
    throw Error(Errc::kUnsupportedMagic,
                std::string("unsupported magic number P") + static_cast<char>(bytes[1]) +
                    " (only binary P5 is supported)");
  }

  HeaderReader header(bytes);
  const long long width = header.next_field("width");
  const long long height = header.next_field("height");
  const long long maxval = header.next_field("maxval");
  if (width < 1 || height < 1) throw Error(Errc::kMalformedHeader, "PGM header: zero dimension");
  if (maxval < 1 || maxval > 65535) throw Error(Errc::kMalformedHeader, "PGM header: maxval out of range");
  if (maxval > 255) {
    throw Error(Errc::kUnsupportedMaxval,
                "unsupported maxval " + std::to_string(maxval) + " (only 8-bit PGM is supported)");
  }
  header.consume_single_whitespace();

  const auto count = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  const std::size_t start = header.position();
  if (bytes.size() - start < count) {
    throw Error(Errc::kTruncatedPayload, "PGM payload truncated: expected " + std::to_string(count) +
                                             " bytes, found " + std::to_string(bytes.size() - start));
  }

  std::vector<double> values(count);
  const double scale = static_cast<double>(maxval);
  for (std::size_t i = 0; i < count; ++i) {
    const auto raw = bytes[start + i];
    if (raw > maxval) throw Error(Errc::kDecodeFailure, "PGM sample exceeds maxval");
    values[i] = raw / scale;
  }
  return GrayImage(static_cast<int>(width), static_cast<int>(height), std::move(values));
}

Bytes save_pgm(const GrayImage& img) {
  if (img.empty()) throw Error(Errc::kInvalidArgument, "cannot encode an empty image");
  const std::string header =
      "P5\n" + std::to_string(img.width()) + " " + std::to_string(img.height()) + "\n255\n";
  Bytes out(header.begin(), header.end());
  out.reserve(out.size() + img.intensities().size());
  for (const double v : img.intensities()) {
    const double q = std::round(v * 255.0);
    out.push_back(static_cast<std::uint8_t>(q < 0.0 ? 0.0 : (q > 255.0 ? 255.0 : q)));
  }
  return out;
}

}  // namespace texnoise::imaging
