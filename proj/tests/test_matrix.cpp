#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include <pathoam/matrix.hpp>

#include "oracles.hpp"

using namespace pathoam;

TEST(IsUnitary, Identity) { EXPECT_TRUE(is_unitary(CMatrix::Identity(4, 4), 1e-9)); }

TEST(IsUnitary, ScaledRowFails) {
  CMatrix m = CMatrix::Zero(2, 2);
  m(0, 0) = 1.0;
  m(1, 1) = 2.0;
  EXPECT_FALSE(is_unitary(m, 1e-9));
}

TEST(IsUnitary, SplitterBlock) {
  CMatrix r(2, 2);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) r(i, j) = oracle::r_entry(std::numbers::pi / 5, 1.3, i, j);
  // R†R by hand.
  CMatrix g = CMatrix::Zero(2, 2);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) g(i, j) += std::conj(r(k, i)) * r(k, j);
  EXPECT_NEAR(std::abs(g(0, 0) - 1.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(g(0, 1)), 0.0, 1e-15);
  EXPECT_TRUE(is_unitary(r, 1e-12));
}

TEST(IsUnitary, NonSquareIsDimensionError) {
  EXPECT_THROW(is_unitary(CMatrix::Zero(2, 3), 1e-9), DimensionError);
}

TEST(HaarRandom, DimOneIsAPhase) {
  for (std::uint64_t seed : {0ull, 1ull, 99ull}) {
    auto u = haar_random_unitary(1, seed);
    EXPECT_NEAR(std::abs(u(0, 0)), 1.0, 1e-15);
  }
}

TEST(HaarRandom, Deterministic) {
  auto a = haar_random_unitary(4, 42);
  auto b = haar_random_unitary(4, 42);
  EXPECT_TRUE(a.matrix() == b.matrix());
  auto c = haar_random_unitary(4, 43);
  EXPECT_FALSE(a.matrix() == c.matrix());
}

TEST(HaarRandom, UnitaryAcrossDims) {
  for (Index dim = 1; dim <= 20; ++dim)
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      auto u = haar_random_unitary(dim, seed);
      EXPECT_TRUE(is_unitary(u.matrix(), 1e-10 * dim)) << dim << " " << seed;
    }
  EXPECT_TRUE(is_unitary(haar_random_unitary(8, 7).matrix(), 1e-10 * 8));
}

TEST(HaarRandom, ZeroDimIsDomainError) { EXPECT_THROW(haar_random_unitary(0, 1), DomainError); }

// Crude distribution check: for Haar U(N), E|U_00|² = 1/N and the phase of
// U_00 is uniform, so E[U_00] = 0.
TEST(HaarRandom, FirstMomentMatchesHaar) {
  const Index dim = 4;
  const int samples = 4000;
  double mean_sq = 0;
  Complex mean = 0;
  for (int s = 0; s < samples; ++s) {
    auto u = haar_random_unitary(dim, 1000 + s);
    mean_sq += std::norm(u(0, 0));
    mean += u(0, 0);
  }
  mean_sq /= samples;
  mean /= samples;
  EXPECT_NEAR(mean_sq, 0.25, 0.01);
  EXPECT_LT(std::abs(mean), 0.03);
}

TEST(Frobenius, Basic) {
  CMatrix i2 = CMatrix::Identity(2, 2);
  EXPECT_EQ(frobenius_distance(i2, i2), 0.0);
  EXPECT_NEAR(frobenius_distance(i2, -i2), std::sqrt(8.0), 1e-15);
}

TEST(Frobenius, GlobalPhaseClosedForm) {
  auto u = haar_random_unitary(3, 5);
  const Complex ph = std::polar(1.0, std::numbers::pi / 3);
  // Each column has unit norm: ‖U − U·e^{iπ/3}‖² = 3·|1 − e^{iπ/3}|².
  const double expected = std::sqrt(3.0 * std::norm(1.0 - ph));
  EXPECT_NEAR(frobenius_distance(u.matrix(), u.matrix() * ph), expected, 1e-14);
  EXPECT_NEAR(expected, std::sqrt(3.0), 1e-15);
}

TEST(Frobenius, MismatchedDims) {
  EXPECT_THROW(frobenius_distance(CMatrix::Identity(2, 2), CMatrix::Identity(3, 3)),
               DimensionError);
}

TEST(Frobenius, SymmetricAndTriangle) {
  for (std::uint64_t s = 0; s < 200; ++s) {
    const Index dim = 1 + static_cast<Index>(s % 7);
    auto a = haar_random_unitary(dim, 3 * s).matrix();
    auto b = haar_random_unitary(dim, 3 * s + 1).matrix();
    auto c = haar_random_unitary(dim, 3 * s + 2).matrix();
    EXPECT_EQ(frobenius_distance(a, b), frobenius_distance(b, a));
    EXPECT_LE(frobenius_distance(a, c), frobenius_distance(a, b) + frobenius_distance(b, c) + 1e-14);
  }
}

TEST(UnitaryJson, RoundTripIsBitExact) {
  for (std::uint64_t s = 0; s < 20; ++s) {
    auto u = haar_random_unitary(1 + static_cast<Index>(s % 9), s);
    const std::string text = dump_pretty(to_json(u));
    auto back = unitary_from_json(json::parse(text));
    EXPECT_TRUE(back.matrix() == u.matrix());
    EXPECT_EQ(dump_pretty(to_json(back)), text);
  }
}

TEST(UnitaryJson, RejectsRaggedRows) {
  json doc = {{"dim", 2}, {"re", {{1.0, 0.0}, {0.0}}}, {"im", {{0.0, 0.0}, {0.0, 0.0}}}};
  try {
    matrix_from_json(doc);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.field(), "$.re[1]");
  }
}

TEST(UnitaryJson, RejectsWrongRowCountAndMissingFields) {
  json doc = {{"dim", 3}, {"re", {{1.0}}}, {"im", {{0.0}}}};
  EXPECT_THROW(matrix_from_json(doc), ParseError);
  json missing = {{"dim", 1}, {"re", {{1.0}}}};
  try {
    matrix_from_json(missing);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.field(), "$.im");
  }
}

TEST(UnitaryJson, RejectsNonFiniteAndNonUnitary) {
  json doc = {{"dim", 1}, {"re", {{1.0}}}, {"im", {{0.0}}}};
  doc["re"][0][0] = std::numeric_limits<double>::infinity();
  EXPECT_THROW(matrix_from_json(doc), Error);
  json scaled = {{"dim", 1}, {"re", {{2.0}}}, {"im", {{0.0}}}};
  try {
    unitary_from_json(scaled);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NEAR(e.measured(), 3.0, 1e-15);
  }
}

TEST(JsonFormat, SortedKeysAndFloatDigits) {
  json j = {{"b", 1}, {"a", 0.1}, {"c", {1.0, 2.5}}};
  EXPECT_EQ(dump_pretty(j),
            "{\n  \"a\": 0.10000000000000001,\n  \"b\": 1,\n  \"c\": [1.0, 2.5]\n}\n");
}

TEST(WrapPhase, Range) {
  EXPECT_EQ(wrap_phase(0.0), 0.0);
  EXPECT_NEAR(wrap_phase(-std::numbers::pi), std::numbers::pi, 1e-15);
  EXPECT_EQ(wrap_phase(kTwoPi), 0.0);
  EXPECT_LT(wrap_phase(-1e-300), kTwoPi);
}
