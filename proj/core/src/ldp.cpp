#include <bit>
#include <cmath>
#include <string>

#include "texnoise/descriptors.hpp"
#include "texnoise/error.hpp"

namespace texnoise::descriptors {
namespace {

// Ring order shared with the 3x3 LBP neighbourhood: E, NE, N, NW, W, SW, S, SE.
constexpr int kRingDx[8] = {1, 1, 0, -1, -1, -1, 0, 1};
constexpr int kRingDy[8] = {0, -1, -1, -1, 0, 1, 1, 1};

std::array<KirschMask, 8> build_masks() {
  std::array<KirschMask, 8> masks{};
  for (int i = 0; i < 8; ++i) {
    for (int j = 0; j < 8; ++j) {
      const int distance = (j - i + 8) % 8;
      const bool strong = distance == 0 || distance == 1 || distance == 7;
      masks[i][kRingDy[j] + 1][kRingDx[j] + 1] = strong ? 5 : -3;
    }
    masks[i][1][1] = 0;
  }
  return masks;
}

// Mask i weights ring cells i-1, i, i+1 by 5 and the other five by -3, so
// m_i = 8 * (d_{i-1} + d_i + d_{i+1}) - 3 * sum(d). Using differences from the
// center keeps flat neighbourhoods at exactly zero.
std::array<double, 8> responses_at(const double* center, int stride) noexcept {
  const double c = *center;
  double d[8];
  double total = 0.0;
  for (int j = 0; j < 8; ++j) {
    d[j] = center[static_cast<std::ptrdiff_t>(kRingDy[j]) * stride + kRingDx[j]] - c;
    total += d[j];
  }
  std::array<double, 8> m{};
  for (int i = 0; i < 8; ++i) {
    const double strong = d[(i + 7) & 7] + d[i] + d[(i + 1) & 7];
    m[i] = std::abs(8.0 * strong - 3.0 * total);
  }
  return m;
}

struct BinTables {
  // bins[k][code] -> index among popcount-k codes, -1 otherwise.
  std::array<std::array<std::int16_t, 256>, 9> bins{};
  std::array<std::size_t, 9> sizes{};

  BinTables() {
    for (int k = 0; k <= 8; ++k) {
      std::int16_t next = 0;
      for (int code = 0; code < 256; ++code) {
        bins[k][code] = std::popcount(static_cast<unsigned>(code)) == k ? next++ : std::int16_t{-1};
      }
      sizes[k] = static_cast<std::size_t>(next);
    }
  }
};

const BinTables& bin_tables() {
  static const BinTables tables;
  return tables;
}

}  // namespace

void LdpParams::validate() const {
  if (k < 1 || k > 7) throw Error(Errc::kInvalidArgument, "LDP k must be in [1, 7]");
}

const std::array<KirschMask, 8>& kirsch_masks() noexcept {
  static const std::array<KirschMask, 8> masks = build_masks();
  return masks;
}

std::array<double, 8> kirsch_responses(const GrayImage& img, int cx, int cy) {
  if (cx < 1 || cy < 1 || cx > img.width() - 2 || cy > img.height() - 2) {
    throw Error(Errc::kBorderViolation, "Kirsch window at (" + std::to_string(cx) + ", " +
                                            std::to_string(cy) + ") leaves the image");
  }
  return responses_at(img.intensities().data() + static_cast<std::size_t>(cy) * img.width() + cx,
                      img.width());
}

std::uint8_t ldp_code(std::span<const double, 8> responses, const LdpParams& params) {
  params.validate();
  std::uint8_t code = 0;
  for (int i = 0; i < 8; ++i) {
    // Rank of i: how many responses beat it, ties going to the lower index.
    int rank = 0;
    for (int j = 0; j < 8; ++j) {
      if (responses[j] > responses[i] || (responses[j] == responses[i] && j < i)) ++rank;
    }
    if (rank < params.k) code |= static_cast<std::uint8_t>(1u << i);
  }
  return code;
}

std::size_t ldp_dimension(int k) {
  if (k < 0 || k > 8) throw Error(Errc::kInvalidArgument, "LDP k must be in [0, 8]");
  return bin_tables().sizes[k];
}

int ldp_bin(std::uint8_t code, int k) {
  if (k < 0 || k > 8) return -1;
  return bin_tables().bins[k][code];
}

std::vector<std::uint64_t> ldp_counts(const GrayImage& img, const LdpParams& params) {
  params.validate();
  if (img.width() < 3 || img.height() < 3) {
    throw Error(Errc::kImageTooSmall, "LDP needs an image of at least 3x3");
  }
  const auto& bins = bin_tables().bins[params.k];
  std::vector<std::uint64_t> counts(ldp_dimension(params.k), 0);
  const int w = img.width();
  const double* data = img.intensities().data();
  for (int y = 1; y < img.height() - 1; ++y) {
    const double* row = data + static_cast<std::size_t>(y) * w;
    for (int x = 1; x < w - 1; ++x) {
      const auto m = responses_at(row + x, w);
      ++counts[static_cast<std::size_t>(bins[ldp_code(m, params)])];
    }
  }
  return counts;
}

FeatureVector ldp_histogram(const GrayImage& img, const LdpParams& params) {
  return normalize_counts(ldp_counts(img, params), descriptor_id(params));
}

}  // namespace texnoise::descriptors
