#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace texnoise {

// All randomness flows through std::mt19937_64, whose output sequence is fixed
// by the standard. The distributions in <random> are implementation-defined, so
// uniform, index and normal draws are done here with documented formulas.

/// Uniform double in [0, 1) from the top 53 bits of one engine output.
double uniform01(std::mt19937_64& engine);

/// Uniform integer in [0, bound), unbiased (rejection sampling).
std::uint64_t uniform_index(std::mt19937_64& engine, std::uint64_t bound);

/// Standard normal deviates via the Box-Muller transform. Each pair of uniforms
/// yields two deviates; the second is cached for the next call.
class NormalSampler {
 public:
  explicit NormalSampler(std::uint64_t seed) : engine_(seed) {}

  double operator()();

 private:
  std::mt19937_64 engine_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

/// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// 64-bit FNV-1a over the bytes of `text`.
std::uint64_t fnv1a64(std::string_view text) noexcept;

/// Per-image noise seed: stable across runs, platforms and corpus edits.
std::uint64_t derive_noise_seed(std::uint64_t master_seed, std::string_view relative_path,
                                double level) noexcept;

/// In-place Fisher-Yates shuffle driven by `uniform_index`.
template <typename It>
void shuffle(It first, It last, std::mt19937_64& engine) {
  const auto n = static_cast<std::uint64_t>(last - first);
  for (std::uint64_t i = n; i > 1; --i) {
    const auto j = uniform_index(engine, i);
    std::swap(first[i - 1], first[j]);
  }
}

}  // namespace texnoise
