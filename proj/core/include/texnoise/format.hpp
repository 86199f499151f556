#pragma once

#include <string>
#include <string_view>

namespace texnoise {

/// Shortest decimal that parses back to exactly `value`. Plain notation for
/// magnitudes in [1e-4, 1e15), scientific outside.
std::string format_number(double value);

/// Fixed-point with `decimals` digits after the point (correctly rounded from
/// the binary value).
std::string format_fixed(double value, int decimals);

/// Parses the whole of `text` as a double. Returns false on any leftover input.
bool parse_number(std::string_view text, double& value) noexcept;

}  // namespace texnoise
