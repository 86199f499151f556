#include <gtest/gtest.h>

#include <bit>
#include <numeric>
#include <random>

#include "oracles/naive_descriptors.hpp"
#include "support.hpp"
#include "texnoise/descriptors.hpp"
#include "texnoise/error.hpp"

namespace {

using namespace texnoise;
using namespace texnoise::descriptors;
using imaging::GrayImage;

template <typename Fn>
Errc error_code(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected texnoise::Error";
  return Errc::kInvalidArgument;
}

GrayImage from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  std::vector<double> v;
  int w = 0;
  for (const auto& r : rows) {
    w = static_cast<int>(r.size());
    v.insert(v.end(), r.begin(), r.end());
  }
  return {w, static_cast<int>(rows.size()), std::move(v)};
}

// --- LBP -------------------------------------------------------------------

TEST(Lbp, NeighbourOrderStartsEastCounterClockwise) {
  // Only the pixel above the center is brighter: north is bit 2.
  const auto img = from_rows({{0.1, 0.9, 0.1}, {0.1, 0.5, 0.1}, {0.1, 0.1, 0.1}});
  EXPECT_EQ(lbp_code(img, 1, 1, {}), 0b00000100u);
  const auto east = from_rows({{0.1, 0.1, 0.1}, {0.1, 0.5, 0.9}, {0.1, 0.1, 0.1}});
  EXPECT_EQ(lbp_code(east, 1, 1, {}), 0b00000001u);
  const auto south_east = from_rows({{0.1, 0.1, 0.1}, {0.1, 0.5, 0.1}, {0.1, 0.1, 0.9}});
  EXPECT_EQ(lbp_code(south_east, 1, 1, {}), 0b10000000u);
}

TEST(Lbp, EqualNeighbourSetsTheBit) {
  const GrayImage flat(3, 3, 0.4);
  EXPECT_EQ(lbp_code(flat, 1, 1, {}), 0xFFu);
}

TEST(Lbp, ConstantImageHasAllMassInTopBin) {
  for (const LbpParams p : {LbpParams{1.0, 8}, LbpParams{2.0, 16}, LbpParams{1.5, 12}}) {
    const auto h = lbp_histogram(GrayImage(12, 12, 0.7), p);
    ASSERT_EQ(h.dimension(), std::size_t{1} << p.samples);
    EXPECT_EQ(h.values.back(), 1.0);
    EXPECT_EQ(std::accumulate(h.values.begin(), h.values.end(), 0.0), 1.0);
  }
}

TEST(Lbp, OnGridSamplesReadPixelsExactly) {
  std::mt19937_64 rng(1);
  const auto img = testing_support::random_image(9, 9, rng);
  const auto s = sample_circular(img, 4, 4, {2.0, 16});
  ASSERT_EQ(s.size(), 16u);
  EXPECT_EQ(s[0], img.at(6, 4));   // east
  EXPECT_EQ(s[4], img.at(4, 2));   // north
  EXPECT_EQ(s[8], img.at(2, 4));   // west
  EXPECT_EQ(s[12], img.at(4, 6));  // south
}

TEST(Lbp, OffGridSampleIsBilinear) {
  // Horizontal ramp: bilinear sampling reproduces the x coordinate.
  std::vector<double> v(9 * 9);
  for (int y = 0; y < 9; ++y) {
    for (int x = 0; x < 9; ++x) v[static_cast<std::size_t>(y) * 9 + x] = x / 8.0;
  }
  const GrayImage ramp(9, 9, v);
  const auto s = sample_circular(ramp, 4, 4, {2.0, 16});
  for (int p = 0; p < 16; ++p) {
    const double x = 4.0 + 2.0 * std::cos(2.0 * std::numbers::pi * p / 16);
    EXPECT_NEAR(s[static_cast<std::size_t>(p)], x / 8.0, 1e-12) << "p=" << p;
  }
}

TEST(Lbp, ConstantNeighbourhoodSamplesAreExact) {
  const GrayImage flat(9, 9, 0.3);
  for (const double v : sample_circular(flat, 4, 4, {3.0, 24})) EXPECT_EQ(v, 0.3);
}

TEST(Lbp, BorderAndSizeErrors) {
  const GrayImage img(5, 5, 0.5);
  EXPECT_EQ(error_code([&] { lbp_code(img, 0, 2, {}); }), Errc::kBorderViolation);
  EXPECT_EQ(error_code([&] { lbp_code(img, 1, 2, {2.0, 16}); }), Errc::kBorderViolation);
  EXPECT_EQ(error_code([&] { lbp_counts(GrayImage(4, 4, 0.5), {2.0, 16}); }), Errc::kImageTooSmall);
  EXPECT_EQ(error_code([&] { lbp_counts(img, {0.5, 8}); }), Errc::kInvalidArgument);
  EXPECT_EQ(error_code([&] { lbp_counts(img, {1.0, 25}); }), Errc::kInvalidArgument);
}

TEST(Lbp, InterpolatedExactTieCountsAsEqual) {
  // Neighbour 14 of (2, 16) sits at (+sqrt2, +sqrt2). With these four cell
  // values it equals the center exactly in real arithmetic.
  std::vector<double> v(25, 0.0);
  v[2 * 5 + 2] = 0.5;
  v[3 * 5 + 3] = 0.5;
  v[3 * 5 + 4] = 0.75;
  v[4 * 5 + 3] = 0.25;
  v[4 * 5 + 4] = 0.5;
  const GrayImage img(5, 5, v);
  EXPECT_NEAR(sample_circular(img, 2, 2, {2.0, 16})[14], 0.5, 1e-15);
  EXPECT_TRUE(lbp_code(img, 2, 2, {2.0, 16}) & (1u << 14));

  // A real gap, however small against the pixel scale, still clears the bit.
  v[3 * 5 + 3] = 0.5 - 1e-6;
  EXPECT_FALSE(lbp_code(GrayImage(5, 5, v), 2, 2, {2.0, 16}) & (1u << 14));
}

TEST(Lbp, CountsCoverEveryValidCenter) {
  std::mt19937_64 rng(2);
  const auto img = testing_support::random_image(20, 15, rng);
  const auto c1 = lbp_counts(img, {1.0, 8});
  const auto c2 = lbp_counts(img, {2.0, 16});
  EXPECT_EQ(std::accumulate(c1.begin(), c1.end(), std::uint64_t{0}), 18u * 13u);
  EXPECT_EQ(std::accumulate(c2.begin(), c2.end(), std::uint64_t{0}), 16u * 11u);
}

TEST(Lbp, MatchesNaiveReference) {
  std::mt19937_64 rng(3);
  const LbpParams grid[] = {{1.0, 8}, {2.0, 16}, {1.0, 4}, {1.5, 12}, {2.5, 10}, {3.0, 24}};
  for (int trial = 0; trial < 6; ++trial) {
    const auto img = trial % 2 ? testing_support::random_8bit_image(14, 13, rng)
                               : testing_support::random_image(14, 13, rng);
    for (const auto& p : grid) {
      EXPECT_EQ(lbp_histogram(img, p).values, oracle::lbp_histogram(img, p.radius, p.samples))
          << "R=" << p.radius << " N=" << p.samples;
      const int m = p.margin();
      for (int y = m; y < img.height() - m; ++y) {
        for (int x = m; x < img.width() - m; ++x) {
          ASSERT_EQ(lbp_code(img, x, y, p), oracle::lbp_code(img, x, y, p.radius, p.samples));
        }
      }
    }
  }
}

// --- LDP -------------------------------------------------------------------

TEST(Kirsch, MasksMatchTheCompassKernels) {
  const auto& masks = kirsch_masks();
  for (int i = 0; i < 8; ++i) {
    int sum = 0;
    int fives = 0;
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) {
        EXPECT_EQ(masks[i][r][c], oracle::kirsch()[i][r][c]) << "mask " << i;
        sum += masks[i][r][c];
        fives += masks[i][r][c] == 5;
      }
    }
    EXPECT_EQ(sum, 0);
    EXPECT_EQ(fives, 3);
    EXPECT_EQ(masks[i][1][1], 0);
  }
}

TEST(Kirsch, ConstantImageGivesZeroResponses) {
  for (const double v : kirsch_responses(GrayImage(3, 3, 0.37), 1, 1)) EXPECT_EQ(v, 0.0);
}

TEST(Kirsch, VerticalStepFavoursEastAndWest) {
  const auto img = from_rows({{0.0, 0.0, 1.0, 1.0}, {0.0, 0.0, 1.0, 1.0}, {0.0, 0.0, 1.0, 1.0}});
  const auto m = kirsch_responses(img, 1, 1);
  // Literal arithmetic: east mask sees 5*3 - 3*0 ... = 15, west sees |-9| = 9.
  EXPECT_EQ(m[0], 15.0);
  EXPECT_EQ(m[4], 9.0);
  for (const int i : {1, 2, 3, 5, 6, 7}) EXPECT_LT(m[i], m[0]);
  EXPECT_EQ(ldp_code(m, {1}), 0b00000001);
}

TEST(Kirsch, MatchesLiteralConvolution) {
  std::mt19937_64 rng(4);
  const auto img = testing_support::random_image(8, 8, rng);
  for (int y = 1; y < 7; ++y) {
    for (int x = 1; x < 7; ++x) {
      const auto fast = kirsch_responses(img, x, y);
      const auto slow = oracle::kirsch_responses(img, x, y);
      for (int i = 0; i < 8; ++i) EXPECT_NEAR(fast[i], slow[i], 1e-12);
    }
  }
}

TEST(Kirsch, BorderViolation) {
  EXPECT_EQ(error_code([] { kirsch_responses(GrayImage(3, 3, 0.1), 0, 1); }), Errc::kBorderViolation);
  EXPECT_EQ(error_code([] { ldp_counts(GrayImage(2, 5, 0.1), {3}); }), Errc::kImageTooSmall);
}

TEST(Ldp, TopKWithLowerIndexTieBreak) {
  const std::array<double, 8> m = {1, 5, 3, 5, 0, 2, 5, 4};
  EXPECT_EQ(ldp_code(m, {1}), 0b00000010);
  EXPECT_EQ(ldp_code(m, {3}), 0b01001010);
  EXPECT_EQ(ldp_code(m, {4}), 0b11001010);
  const std::array<double, 8> flat{};
  EXPECT_EQ(ldp_code(flat, {3}), 0b00000111);
  EXPECT_EQ(ldp_code(flat, {5}), 0b00011111);
}

TEST(Ldp, PopcountAlwaysK) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> level(0, 3);
  for (int t = 0; t < 5000; ++t) {
    std::array<double, 8> m{};
    for (auto& v : m) v = level(rng);  // many ties
    for (int k = 1; k <= 7; ++k) ASSERT_EQ(std::popcount(ldp_code(m, {k})), k);
  }
  EXPECT_EQ(error_code([] { ldp_code(std::array<double, 8>{}, {0}); }), Errc::kInvalidArgument);
  EXPECT_EQ(error_code([] { ldp_code(std::array<double, 8>{}, {8}); }), Errc::kInvalidArgument);
}

TEST(Ldp, BinLayout) {
  EXPECT_EQ(ldp_dimension(3), 56u);
  EXPECT_EQ(ldp_dimension(5), 56u);
  EXPECT_EQ(ldp_dimension(1), 8u);
  EXPECT_EQ(ldp_bin(0b00000111, 3), 0);
  EXPECT_EQ(ldp_bin(0b00001011, 3), 1);
  EXPECT_EQ(ldp_bin(0b11100000, 3), 55);
  EXPECT_EQ(ldp_bin(0b00000011, 3), -1);
}

TEST(Ldp, MatchesNaiveReference) {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 5; ++trial) {
    const auto img = testing_support::random_image(15, 12, rng);
    for (int k = 1; k <= 7; ++k) {
      EXPECT_EQ(ldp_histogram(img, {k}).values, oracle::ldp_histogram(img, k)) << "k=" << k;
    }
  }
}

TEST(Ldp, FlatImageCountsLowestBits) {
  const auto h = ldp_histogram(GrayImage(6, 6, 0.5), {3});
  EXPECT_EQ(h.values[0], 1.0);
}

// --- configuration ---------------------------------------------------------

TEST(DescriptorConfig, ParseAndNames) {
  const auto lbp = parse_descriptor("lbp:2,16");
  ASSERT_TRUE(std::holds_alternative<LbpParams>(lbp));
  EXPECT_EQ(std::get<LbpParams>(lbp), (LbpParams{2.0, 16}));
  EXPECT_EQ(descriptor_id(lbp), "lbp-r2-n16");
  EXPECT_EQ(display_name(lbp), "LBP (R=2, N=16)");
  EXPECT_EQ(to_spec_string(lbp), "lbp:2,16");
  EXPECT_EQ(feature_dimension(lbp), 65536u);

  const auto ldp = parse_descriptor("ldp:3");
  EXPECT_EQ(descriptor_id(ldp), "ldp-k3");
  EXPECT_EQ(display_name(ldp), "LDP (k=3)");
  EXPECT_EQ(feature_dimension(ldp), 56u);

  const auto frac = parse_descriptor("lbp:1.5,12");
  EXPECT_EQ(parse_descriptor(to_spec_string(frac)), frac);
  EXPECT_NE(descriptor_id(frac), descriptor_id(parse_descriptor("lbp:1,12")));
}

TEST(DescriptorConfig, ParseErrors) {
  for (const char* bad : {"", "lbp", "lbp:1", "lbp:1,8,3", "lbp:x,8", "ldp:", "ldp:9", "hog:3", "lbp:0.5,8"}) {
    EXPECT_EQ(error_code([&] { parse_descriptor(bad); }), Errc::kInvalidArgument) << bad;
  }
}

TEST(DescriptorConfig, ExtractDispatches) {
  std::mt19937_64 rng(7);
  const auto img = testing_support::random_image(10, 10, rng);
  EXPECT_EQ(extract(img, LbpParams{}).values, lbp_histogram(img, {}).values);
  EXPECT_EQ(extract(img, LdpParams{5}).descriptor_id, "ldp-k5");
}

TEST(DescriptorConfig, NormalizeCounts) {
  const std::vector<std::uint64_t> counts = {1, 0, 3};
  const auto fv = normalize_counts(counts, "x");
  EXPECT_EQ(fv.values, (std::vector<double>{0.25, 0.0, 0.75}));
  const std::vector<std::uint64_t> empty = {0, 0};
  EXPECT_EQ(normalize_counts(empty, "x").values, (std::vector<double>{0.0, 0.0}));
}

}  // namespace
