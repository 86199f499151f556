#include <charconv>
#include <cmath>
#include <numeric>
#include <sstream>

#include "texnoise/descriptors.hpp"
#include "texnoise/error.hpp"
#include "texnoise/format.hpp"

namespace texnoise::descriptors {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

double parse_double(std::string_view text, std::string_view context) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw Error(Errc::kInvalidArgument, "bad number '" + std::string(text) + "' in " + std::string(context));
  }
  return value;
}

int parse_int(std::string_view text, std::string_view context) {
  int value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw Error(Errc::kInvalidArgument, "bad integer '" + std::string(text) + "' in " + std::string(context));
  }
  return value;
}

}  // namespace

DescriptorConfig parse_descriptor(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) {
    throw Error(Errc::kInvalidArgument, "descriptor must look like lbp:R,N or ldp:k, got '" +
                                            std::string(text) + "'");
  }
  const auto kind = text.substr(0, colon);
  const auto args = text.substr(colon + 1);
  if (kind == "lbp") {
    const auto comma = args.find(',');
    if (comma == std::string_view::npos) {
      throw Error(Errc::kInvalidArgument, "lbp descriptor needs R,N");
    }
    LbpParams params{parse_double(args.substr(0, comma), text), parse_int(args.substr(comma + 1), text)};
    params.validate();
    return params;
  }
  if (kind == "ldp") {
    LdpParams params{parse_int(args, text)};
    params.validate();
    return params;
  }
  throw Error(Errc::kInvalidArgument, "unknown descriptor kind '" + std::string(kind) + "'");
}

std::string to_spec_string(const DescriptorConfig& config) {
  return std::visit(overloaded{
                        [](const LbpParams& p) {
                          return "lbp:" + format_number(p.radius) + "," + std::to_string(p.samples);
                        },
                        [](const LdpParams& p) { return "ldp:" + std::to_string(p.k); },
                    },
                    config);
}

std::string descriptor_id(const DescriptorConfig& config) {
  return std::visit(overloaded{
                        [](const LbpParams& p) {
                          return "lbp-r" + format_number(p.radius) + "-n" + std::to_string(p.samples);
                        },
                        [](const LdpParams& p) { return "ldp-k" + std::to_string(p.k); },
                    },
                    config);
}

std::string display_name(const DescriptorConfig& config) {
  return std::visit(overloaded{
                        [](const LbpParams& p) {
                          return "LBP (R=" + format_number(p.radius) + ", N=" + std::to_string(p.samples) + ")";
                        },
                        [](const LdpParams& p) { return "LDP (k=" + std::to_string(p.k) + ")"; },
                    },
                    config);
}

FeatureVector normalize_counts(std::span<const std::uint64_t> counts, std::string id) {
  const std::uint64_t total = std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
  FeatureVector fv{std::vector<double>(counts.size(), 0.0), std::move(id)};
  if (total == 0) return fv;
  const auto denom = static_cast<double>(total);
  for (std::size_t i = 0; i < counts.size(); ++i) fv.values[i] = static_cast<double>(counts[i]) / denom;
  return fv;
}

FeatureVector extract(const GrayImage& img, const DescriptorConfig& config) {
  return std::visit(overloaded{
                        [&](const LbpParams& p) { return lbp_histogram(img, p); },
                        [&](const LdpParams& p) { return ldp_histogram(img, p); },
                    },
                    config);
}

std::size_t feature_dimension(const DescriptorConfig& config) {
  return std::visit(overloaded{
                        [](const LbpParams& p) {
                          p.validate();
                          return std::size_t{1} << p.samples;
                        },
                        [](const LdpParams& p) {
                          p.validate();
                          return ldp_dimension(p.k);
                        },
                    },
                    config);
}

}  // namespace texnoise::descriptors
