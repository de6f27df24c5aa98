#include <gtest/gtest.h>

#include <random>

#include "etlab/modring.hpp"
#include "etlab/numtheory.hpp"
#include "etlab/rational.hpp"
#include "oracles.hpp"

using namespace etlab;

TEST(Dot, SmallExamples) {
  EXPECT_EQ(dot(ResidueVector{1, 1}, ResidueVector{1, 1}, 2), 0);
  EXPECT_EQ(dot(ResidueVector{1, 1, 1, 0}, ResidueVector{1, 1, 1, 0}, 3), 0);
  EXPECT_EQ(dot(ResidueVector{1, 2}, ResidueVector{2, 3}, 5), 3);
}

TEST(Dot, LengthMismatchThrows) {
  EXPECT_THROW(dot(ResidueVector{1, 2}, ResidueVector{1}, 3), DimensionError);
}

TEST(Dot, Symmetric) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 500; ++trial) {
    const std::int64_t k = 2 + static_cast<std::int64_t>(rng() % 30);
    const int n = 1 + static_cast<int>(rng() % 6);
    ResidueVector u(n), v(n);
    for (int i = 0; i < n; ++i) {
      u[i] = static_cast<Residue>(rng() % k);
      v[i] = static_cast<Residue>(rng() % k);
    }
    EXPECT_EQ(dot(u, v, k), dot(v, u, k));
    EXPECT_EQ(dot(u, v, k), oracle::dot(u, v, k));
  }
}

TEST(Dot, CharacteristicVectorsCountIntersectionParity) {
  for (int n = 1; n <= 4; ++n)
    for (unsigned x = 0; x < (1u << n); ++x)
      for (unsigned y = 0; y < (1u << n); ++y) {
        ResidueVector cx(n), cy(n);
        for (int i = 0; i < n; ++i) {
          cx[i] = (x >> i) & 1;
          cy[i] = (y >> i) & 1;
        }
        EXPECT_EQ(dot(cx, cy, 2), __builtin_popcount(x & y) % 2);
      }
}

TEST(Encoding, RoundTripAndOrder) {
  EXPECT_EQ(encode(ResidueVector{1, 0}, 3), 3u);
  EXPECT_EQ(decode(5, 3, 2), (ResidueVector{1, 2}));
  for (std::uint64_t i = 0; i < 125; ++i) EXPECT_EQ(encode(decode(i, 5, 3), 5), i);
  EXPECT_FALSE(space_size(10, 30).has_value());
  EXPECT_EQ(*space_size(4, 3), 64u);
}

TEST(ModFamily, Validation) {
  EXPECT_THROW(ModFamily(1, 2, {}), ParameterError);
  EXPECT_THROW(ModFamily(3, 2, {{0, 3}}), ParameterError);
  EXPECT_THROW(ModFamily(3, 2, {{0, 1, 2}}), DimensionError);
  EXPECT_THROW(ModFamily(3, 2, {{0, 1}, {0, 1}}), ParameterError);
  auto f = ModFamily::from_unreduced(3, 2, {{3, 4}, {0, 1}, {-3, 7}});
  EXPECT_EQ(f.size(), 1u);
  EXPECT_TRUE(f.contains({0, 1}));
}

TEST(IsTown, Examples) {
  EXPECT_TRUE(is_town(ModFamily(3, 2, {{0, 0}}), 0));
  EXPECT_TRUE(is_town(ModFamily(2, 2, {{0, 0}, {1, 1}}), 0));
  EXPECT_FALSE(is_town(ModFamily(3, 2, {{1, 0}}), 0));
  EXPECT_TRUE(is_town(ModFamily(3, 2, {}), 0));
}

TEST(PairStats, Examples) {
  auto a = pair_stats(ModFamily(2, 2, {{0, 0}, {1, 1}}), 0);
  EXPECT_EQ(a.ordered_bad, 0);
  EXPECT_EQ(a.op_value, 0);

  auto b = pair_stats(ModFamily(2, 2, {{1, 0}, {0, 1}}), 0);
  EXPECT_EQ(b.diagonal_bad, 2);
  EXPECT_EQ(b.ordered_bad, 2);
  EXPECT_EQ(b.op_value, 0);
  EXPECT_EQ(b.epsilon_ordered, Rational(1, 2));

  // All of {0,1}^2: the only odd pairs are {(1,0),(1,1)} and {(0,1),(1,1)}.
  auto c = pair_stats(ModFamily(2, 2, {{0, 0}, {0, 1}, {1, 0}, {1, 1}}), 0);
  std::int64_t odd = 0;
  const auto all = oracle::all_vectors(2, 2);
  for (std::size_t i = 0; i < all.size(); ++i)
    for (std::size_t j = i + 1; j < all.size(); ++j) odd += oracle::dot(all[i], all[j], 2);
  EXPECT_EQ(odd, 2);
  EXPECT_EQ(c.op_value, odd);
  EXPECT_EQ(c.diagonal_bad, 2);

  EXPECT_FALSE(pair_stats(ModFamily(3, 1, {{1}}), 0).op_value.has_value());
}

TEST(PairStats, IdentityAndTownEquivalenceOnRandomFamilies) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const std::int64_t k = 2 + static_cast<std::int64_t>(rng() % 6);
    const int n = 1 + static_cast<int>(rng() % 3);
    const Residue t = static_cast<Residue>(rng() % k);
    std::vector<ResidueVector> raw;
    const int m = 1 + static_cast<int>(rng() % 8);
    for (int i = 0; i < m; ++i) {
      ResidueVector v(n);
      for (auto& x : v) x = static_cast<Residue>(rng() % k);
      raw.push_back(v);
    }
    const auto f = ModFamily::from_unreduced(k, n, raw);
    const auto s = pair_stats(f, t);
    EXPECT_EQ(s.ordered_bad, 2 * s.unordered_bad_offdiag + s.diagonal_bad);
    EXPECT_EQ(is_town(f, t), s.ordered_bad == 0);
    std::int64_t bad = 0;
    for (const auto& x : f)
      for (const auto& y : f) bad += oracle::dot(x, y, k) != t;
    EXPECT_EQ(s.ordered_bad, bad);
  }
}

TEST(SubsetsToFamily, Examples) {
  EXPECT_EQ(subsets_to_family({{}, {1, 2}}, 2), ModFamily(2, 2, {{0, 0}, {1, 1}}));
  EXPECT_EQ(subsets_to_family({{1}, {2}}, 2), ModFamily(2, 2, {{1, 0}, {0, 1}}));
  auto f = subsets_to_family({{1, 3}, {2, 3}}, 3);
  EXPECT_EQ(f[0], (ResidueVector{1, 0, 1}));
  EXPECT_EQ(f[1], (ResidueVector{0, 1, 1}));
  EXPECT_EQ(dot(f[0], f[1], 2), 1);
  EXPECT_THROW(subsets_to_family({{4}}, 3), ParameterError);
}

TEST(FamilyJson, RoundTripSorted) {
  ModFamily f(5, 2, {{3, 1}, {0, 0}, {1, 2}});
  auto j = family_to_json(f);
  EXPECT_EQ(j["vectors"][0], nlohmann::json({0, 0}));
  EXPECT_EQ(j["vectors"][2], nlohmann::json({3, 1}));
  EXPECT_EQ(family_from_json(j), f);
  EXPECT_THROW(family_from_json(nlohmann::json{{"k", 5}}), ParameterError);
  EXPECT_THROW(family_from_json(nlohmann::json{{"k", 5}, {"n", 1}, {"vectors", {{7}}}}), ParameterError);
}

TEST(NumberTheory, PrimitiveRoots) {
  EXPECT_EQ(primitive_root(5), 2);
  EXPECT_EQ(primitive_root(13), 2);
  EXPECT_EQ(primitive_root(2), 1);
  EXPECT_EQ(primitive_root(7), 3);
  EXPECT_THROW(primitive_root(9), ParameterError);
  for (std::int64_t p : {3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 101}) {
    const auto g = primitive_root(p);
    std::set<Residue> powers;
    Residue x = 1;
    for (int i = 0; i < p - 1; ++i) {
      powers.insert(x);
      x = x * g % p;
    }
    EXPECT_EQ(powers.size(), static_cast<std::size_t>(p - 1)) << p;
  }
}

TEST(NumberTheory, Basics) {
  EXPECT_EQ(mod(-1, 5), 4);
  EXPECT_TRUE(is_prime(10007));
  EXPECT_FALSE(is_prime(1));
  EXPECT_EQ(mod_pow(3, 4, 7), 4);
  EXPECT_EQ(*mod_inverse(3, 7), 5);
  EXPECT_FALSE(mod_inverse(2, 4).has_value());
  EXPECT_EQ(prime_factors(360), (std::vector<std::int64_t>{2, 3, 5}));
  EXPECT_EQ(crt_pair(1, 2, 4, 9), 13);
  EXPECT_EQ(*exact_sqrt(49), 7);
  EXPECT_FALSE(exact_sqrt(50).has_value());
  EXPECT_THROW(ipow(10, 30), std::overflow_error);
}

TEST(RationalTest, ArithmeticAndParsing) {
  EXPECT_EQ(Rational(2, 4).str(), "1/2");
  EXPECT_EQ(Rational(-6, -3).str(), "2");
  EXPECT_EQ(Rational::parse("0.1"), Rational(1, 10));
  EXPECT_EQ(Rational::parse("7/60"), Rational(7, 60));
  EXPECT_EQ(Rational::parse("-3"), Rational(-3));
  EXPECT_EQ(Rational(1, 3) + Rational(1, 6), Rational(1, 2));
  EXPECT_EQ(Rational(3, 4) * Rational(2, 3), Rational(1, 2));
  EXPECT_EQ(Rational(1) / Rational(2, 5), Rational(5, 2));
  EXPECT_LT(Rational(1, 3), Rational(1, 2));
  EXPECT_TRUE(Rational(4, 2).is_integer());
  EXPECT_ANY_THROW(Rational(1, 0));
}
