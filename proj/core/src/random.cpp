#include "texnoise/random.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <numbers>

namespace texnoise {

double uniform01(std::mt19937_64& engine) {
  return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

std::uint64_t uniform_index(std::mt19937_64& engine, std::uint64_t bound) {
  if (bound <= 1) return 0;
  // Reject the tail so every residue is equally likely.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x = engine();
  while (x >= limit) x = engine();
  return x % bound;
}

double NormalSampler::operator()() {
  if (has_cached_) {
    has_cached_ = false;
    return cached_;
  }
  // u1 in (0, 1] keeps the log finite.
  const double u1 = 1.0 - uniform01(engine_);
  const double u2 = uniform01(engine_);
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  cached_ = radius * std::sin(angle);
  has_cached_ = true;
  return radius * std::cos(angle);
}

std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a64(std::string_view text) noexcept {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (const char c : text) {
    hash ^= static_cast<unsigned char>(c);
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

std::uint64_t derive_noise_seed(std::uint64_t master_seed, std::string_view relative_path,
                                double level) noexcept {
  // +0.0 and -0.0 hash alike.
  const auto level_bits = std::bit_cast<std::uint64_t>(level == 0.0 ? 0.0 : level);
  std::uint64_t h = mix64(master_seed);
  h = mix64(h ^ fnv1a64(relative_path));
  h = mix64(h ^ level_bits);
  return h;
}

}  // namespace texnoise
