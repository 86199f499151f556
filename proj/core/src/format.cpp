#include "texnoise/format.hpp"

#include <array>
#include <charconv>
#include <cmath>

namespace texnoise {

std::string format_number(double value) {
  std::array<char, 64> buffer{};
  const double magnitude = std::fabs(value);
  const bool plain = !std::isfinite(value) || magnitude == 0.0 || (magnitude >= 1e-4 && magnitude < 1e15);
  const auto result = std::to_chars(buffer.data(), buffer.data() + buffer.size(), value,
                                    plain ? std::chars_format::fixed : std::chars_format::scientific);
  return std::string(buffer.data(), result.ptr);
}

std::string format_fixed(double value, int decimals) {
  std::array<char, 64> buffer{};
  const auto result = std::to_chars(buffer.data(), buffer.data() + buffer.size(), value,
                                    std::chars_format::fixed, decimals);
  return std::string(buffer.data(), result.ptr);
}

bool parse_number(std::string_view text, double& value) noexcept {
  if (text.empty()) return false;
  // from_chars rejects a leading '+'; accept it for hand-written files.
  if (text.front() == '+') text.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  return ec == std::errc{} && ptr == text.data() + text.size();
}

}  // namespace texnoise
