#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "dgo/bitcodec.hpp"

namespace dgo {
namespace {

// Integer oracles, independent of the BitString implementation.
std::uint64_t gray_int(std::uint64_t k) { return k ^ (k >> 1); }
std::uint64_t inverse_gray_int(std::uint64_t g) {
  for (std::uint64_t shift = 1; shift < 64; shift <<= 1) g ^= g >> shift;
  return g;
}

BitString random_bits(std::mt19937_64& rng, std::size_t length) {
  BitString s(length);
  for (std::size_t i = 0; i < length; ++i) s.set(i, (rng() & 1U) != 0);
  return s;
}

TEST(BitString, ParsesAndPrints) {
  const auto s = BitString::from_string("10110");
  EXPECT_EQ(s.size(), 5u);
  EXPECT_EQ(s.to_string(), "10110");
  EXPECT_EQ(s.to_uint(), 22u);
  EXPECT_EQ(BitString::from_uint(22, 5), s);
  EXPECT_THROW(BitString::from_string("10a"), std::invalid_argument);
}

TEST(Gray, ZeroIsFixedPoint) {
  EXPECT_EQ(to_gray(BitString::from_string("0000")).to_string(), "0000");
  EXPECT_EQ(from_gray(BitString::from_string("0000")).to_string(), "0000");
}

TEST(Gray, HandExamples) {
  EXPECT_EQ(to_gray(BitString::from_string("101")).to_string(), "111");
  EXPECT_EQ(from_gray(BitString::from_string("111")).to_string(), "101");
}

TEST(Gray, MatchesIntegerFormulaExhaustively12Bits) {
  for (std::uint64_t k = 0; k < 4096; ++k) {
    const auto s = BitString::from_uint(k, 12);
    ASSERT_EQ(to_gray(s).to_uint(), gray_int(k)) << k;
    ASSERT_EQ(from_gray(s).to_uint(), inverse_gray_int(k)) << k;
  }
}

TEST(Gray, ConsecutiveIntegersDifferInOneBit) {
  for (std::uint64_t k = 0; k + 1 < 4096; ++k) {
    const auto a = to_gray(BitString::from_uint(k, 12));
    const auto b = to_gray(BitString::from_uint(k + 1, 12));
    ASSERT_EQ((a ^ b).popcount(), 1u) << k;
  }
}

TEST(Gray, RoundTripExhaustive16Bits) {
  for (std::uint64_t k = 0; k < (1u << 16); ++k) {
    const auto s = BitString::from_uint(k, 16);
    ASSERT_EQ(from_gray(to_gray(s)), s);
    ASSERT_EQ(to_gray(from_gray(s)), s);
  }
}

TEST(Gray, RoundTripRandomLongStrings) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 10'000; ++i) {
    const auto s = random_bits(rng, 1 + rng() % 1024);
    ASSERT_EQ(from_gray(to_gray(s)), s);
    ASSERT_EQ(to_gray(from_gray(s)), s);
  }
}

TEST(Quantizer, RejectsBadConfiguration) {
  EXPECT_THROW(Quantizer({}, 4), std::invalid_argument);
  EXPECT_THROW(Quantizer({{-1, 1}}, 0), std::invalid_argument);
  EXPECT_THROW(Quantizer({{-1, 1}}, 53), std::invalid_argument);
  EXPECT_THROW(Quantizer({{1, 1}}, 4), std::invalid_argument);
  EXPECT_THROW(Quantizer({{2, 1}}, 4), std::invalid_argument);
}

TEST(EncodePoint, EndpointsMapToExtremeIndices) {
  const Quantizer q({{-1, 1}}, 4);
  EXPECT_EQ(encode_point(std::vector{-1.0}, q).to_string(), "0000");
  EXPECT_EQ(encode_point(std::vector{1.0}, q).to_string(), "1111");
}

TEST(EncodePoint, AffineRounding) {
  // round(0.66 / 2 * 3) = round(0.99) = 1
  const Quantizer q({{-1, 1}}, 2);
  EXPECT_EQ(encode_point(std::vector{-0.34}, q).to_string(), "01");
}

TEST(EncodePoint, ClampsOutOfRange) {
  const Quantizer q({{-1, 1}, {0, 10}}, 3);
  EXPECT_EQ(encode_point(std::vector{-7.0, 99.0}, q).to_string(), "000111");
  EXPECT_THROW(encode_point(std::vector{0.0}, q), std::invalid_argument);
}

TEST(EncodePoint, DimensionsConcatenateMsbFirst) {
  const Quantizer q({{0, 15}, {0, 15}}, 4);
  EXPECT_EQ(encode_point(std::vector{3.0, 12.0}, q).to_string(), "00111100");
}

TEST(DecodePoint, Examples) {
  const Quantizer q4({{-1, 1}}, 4);
  EXPECT_EQ(decode_point(BitString::from_string("0000"), q4)[0], -1.0);
  EXPECT_EQ(decode_point(BitString::from_string("1111"), q4)[0], 1.0);
  const Quantizer q2({{-1, 1}}, 2);
  EXPECT_NEAR(decode_point(BitString::from_string("01"), q2)[0], -1.0 / 3.0, 1e-15);
  EXPECT_THROW(decode_point(BitString::from_string("011"), q2), std::invalid_argument);
}

TEST(Codec, EncodeInvertsDecodeExhaustively) {
  for (unsigned dims : {1u, 2u, 4u}) {
    const unsigned bits = 16 / dims;
    std::vector<Bounds> bounds;
    for (unsigned j = 0; j < dims; ++j) bounds.push_back({-3.0 - j, 2.5 + 0.5 * j});
    const Quantizer q(bounds, bits);
    for (std::uint64_t k = 0; k < (1u << 16); ++k) {
      const auto s = BitString::from_uint(k, 16);
      ASSERT_EQ(encode_point(decode_point(s, q), q), s) << dims << " " << k;
    }
  }
}

TEST(Codec, DecodeOfEncodeWithinHalfStep) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-12.0, 12.0);
  const Quantizer q({{-10, 10}, {-1, 3}, {0, 0.5}}, 9);
  for (int i = 0; i < 5000; ++i) {
    const std::vector<double> x{u(rng), u(rng), u(rng)};
    const auto y = decode_point(encode_point(x, q), q);
    for (std::size_t j = 0; j < 3; ++j) {
      const double clamped = std::clamp(x[j], q.bounds()[j].lo, q.bounds()[j].hi);
      ASSERT_LE(std::abs(y[j] - clamped), 0.5 * q.grid_step(j) * (1 + 1e-12));
    }
  }
}

TEST(Requantize, Examples) {
  const Quantizer q4({{0, 1}}, 4), q5({{0, 1}}, 5);
  EXPECT_EQ(requantize(BitString::from_uint(0, 4), q4, q5).to_uint(), 0u);
  EXPECT_EQ(requantize(BitString::from_uint(15, 4), q4, q5).to_uint(), 31u);
  // x = 1/3 at 2 bits -> round(1/3 * 7) = 2 at 3 bits
  const Quantizer q2({{0, 1}}, 2), q3({{0, 1}}, 3);
  EXPECT_EQ(requantize(BitString::from_uint(1, 2), q2, q3).to_uint(), 2u);
}

TEST(Requantize, RejectsCoarserOrMismatchedTarget) {
  const Quantizer q4({{0, 1}}, 4);
  EXPECT_THROW(requantize(BitString(4), q4, q4), std::invalid_argument);
  EXPECT_THROW(requantize(BitString(4), q4, Quantizer({{0, 2}}, 5)), std::invalid_argument);
}

TEST(Requantize, MovesAtMostHalfNewStep) {
  std::mt19937_64 rng(3);
  const Quantizer from({{-2, 5}, {10, 11}}, 7);
  for (unsigned finer : {8u, 9u, 12u, 20u}) {
    const Quantizer to = from.with_bits(finer);
    for (int i = 0; i < 2000; ++i) {
      const auto s = random_bits(rng, from.length());
      const auto before = decode_point(s, from);
      const auto after = decode_point(requantize(s, from, to), to);
      for (std::size_t j = 0; j < 2; ++j)
        ASSERT_LE(std::abs(after[j] - before[j]), 0.5 * to.grid_step(j) * (1 + 1e-9));
    }
  }
}

}  // namespace
}  // namespace dgo
