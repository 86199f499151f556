#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "texnoise/imaging.hpp"

namespace texnoise::descriptors {

using imaging::GrayImage;

/// Circular neighbourhood of `samples` points at distance `radius`.
/// Point p sits at angle 2*pi*p/N, counter-clockwise from east (image y grows
/// downward, so north is -y).
struct LbpParams {
  double radius = 1.0;
  int samples = 8;

  void validate() const;
  /// Border margin a valid center needs: ceil(radius).
  int margin() const;
  /// R = 1, N = 8 reads the eight integer 3x3 neighbours directly.
  bool uses_integer_neighbours() const { return radius == 1.0 && samples == 8; }

  friend bool operator==(const LbpParams&, const LbpParams&) = default;
};

/// Number of strongest Kirsch responses that set bits in an LDP code.
struct LdpParams {
  int k = 3;

  void validate() const;

  friend bool operator==(const LdpParams&, const LdpParams&) = default;
};

using DescriptorConfig = std::variant<LbpParams, LdpParams>;

/// Parses "lbp:R,N" or "ldp:k".
DescriptorConfig parse_descriptor(std::string_view text);
/// Inverse of parse_descriptor.
std::string to_spec_string(const DescriptorConfig& config);
/// Stable identifier used in feature files and result tables, e.g. "lbp-r1-n8".
std::string descriptor_id(const DescriptorConfig& config);
/// Human-readable row label, e.g. "LBP (R=1, N=8)".
std::string display_name(const DescriptorConfig& config);

struct FeatureVector {
  std::vector<double> values;
  std::string descriptor_id;

  std::size_t dimension() const noexcept { return values.size(); }
};

/// L1-normalizes integer code counts into a feature vector.
FeatureVector normalize_counts(std::span<const std::uint64_t> counts, std::string descriptor_id);

// --- LBP -------------------------------------------------------------------

/// The N neighbour intensities around (cx, cy). Coordinates within 1e-9 of an
/// integer are snapped so on-grid points read pixels exactly.
std::vector<double> sample_circular(const GrayImage& img, int cx, int cy, const LbpParams& params);

/// Bit p is set iff neighbour p >= center. An interpolated neighbour less
/// than 1e-9 below the center counts as equal to it.
std::uint32_t lbp_code(const GrayImage& img, int cx, int cy, const LbpParams& params);

/// Unnormalized 2^N-bin code counts over every center at least margin() from
/// the border.
std::vector<std::uint64_t> lbp_counts(const GrayImage& img, const LbpParams& params);

FeatureVector lbp_histogram(const GrayImage& img, const LbpParams& params);

// --- LDP -------------------------------------------------------------------

using KirschMask = std::array<std::array<int, 3>, 3>;

/// The eight Kirsch compass masks, index 0 = east, then counter-clockwise in
/// 45 degree steps. mask[row][col] weights pixel (cx + col - 1, cy + row - 1).
const std::array<KirschMask, 8>& kirsch_masks() noexcept;

/// Absolute edge responses |sum(mask_i * window)| for the 3x3 window at (cx, cy).
std::array<double, 8> kirsch_responses(const GrayImage& img, int cx, int cy);

/// Sets the bits of the k largest responses; equal responses favour the lower
/// mask index. popcount(result) == k.
std::uint8_t ldp_code(std::span<const double, 8> responses, const LdpParams& params);

/// C(8, k).
std::size_t ldp_dimension(int k);

/// Position of `code` among the popcount-k codes in increasing numeric order,
/// or -1 when popcount(code) != k.
int ldp_bin(std::uint8_t code, int k);

std::vector<std::uint64_t> ldp_counts(const GrayImage& img, const LdpParams& params);

FeatureVector ldp_histogram(const GrayImage& img, const LdpParams& params);

// ---------------------------------------------------------------------------

FeatureVector extract(const GrayImage& img, const DescriptorConfig& config);

std::size_t feature_dimension(const DescriptorConfig& config);

}  // namespace texnoise::descriptors
