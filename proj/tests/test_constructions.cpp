#include <gtest/gtest.h>

#include "etlab/constructions.hpp"
#include "etlab/linalg_mod.hpp"
#include "oracles.hpp"

using namespace etlab;

namespace {

void expect_extremal(const ModFamily& f, std::size_t size) {
  EXPECT_TRUE(is_town(f, 0));
  EXPECT_EQ(f.size(), size);
  if (f.size() <= 10000) {
    EXPECT_TRUE(is_additively_closed(f));
  }
}

}  // namespace

TEST(EventownPairing, Examples) {
  EXPECT_EQ(eventown_pairing(2), ModFamily(2, 2, {{0, 0}, {1, 1}}));
  auto f5 = eventown_pairing(5);
  EXPECT_EQ(f5.size(), 4u);
  for (const auto& v : f5) EXPECT_EQ(v[4], 0);
  auto f10 = eventown_pairing(10);
  EXPECT_EQ(f10.size(), 32u);
  EXPECT_EQ(pair_stats(f10, 0).op_value, 0);
  EXPECT_EQ(eventown_pairing(1).size(), 1u);
}

TEST(EventownPairing, SizesUpToTwenty) {
  for (int n = 1; n <= 14; ++n) expect_extremal(eventown_pairing(n), static_cast<std::size_t>(1) << (n / 2));
}

TEST(Prime4t1, Examples) {
  auto f = prime_4t1(5, 2);
  EXPECT_EQ(f, ModFamily(5, 2, {{0, 0}, {1, 2}, {2, 4}, {3, 1}, {4, 3}}));
  expect_extremal(f, 5);
  expect_extremal(prime_4t1(13, 2), 13);
  expect_extremal(prime_4t1(5, 4), 25);
  expect_extremal(prime_4t1(17, 4), 289);
  EXPECT_THROW(prime_4t1(7, 2), ParameterError);
  EXPECT_THROW(prime_4t1(5, 3), ParameterError);
}

TEST(IsotropicChain, Examples) {
  expect_extremal(isotropic_chain(3, 4), 9);
  expect_extremal(isotropic_chain(7, 4), 49);
  expect_extremal(isotropic_chain(5, 2), 5);
  expect_extremal(isotropic_chain(11, 4), 121);
  expect_extremal(isotropic_chain(3, 8), 81);
  expect_extremal(isotropic_chain(7, 8), 2401);
  EXPECT_THROW(isotropic_chain(3, 2), ConstructionInfeasible);
  EXPECT_THROW(isotropic_chain(9, 4), ParameterError);
  EXPECT_THROW(isotropic_chain(3, 3), ParameterError);
}

TEST(IsotropicChain, InfeasibleWhenWittIndexIsShort) {
  // Over Z/3 the sum of six squares has Witt index 2: the oracle finds no
  // totally isotropic subspace of dimension 3, so no 27-member 0-town.
  EXPECT_THROW(isotropic_chain(3, 6), ConstructionInfeasible);
  EXPECT_THROW(isotropic_chain(7, 2), ConstructionInfeasible);
  EXPECT_EQ(oracle::max_town(3, 2, 0), 1u);
}

TEST(IsotropicChain, SeedDeterminism) {
  for (std::uint64_t seed : {0ull, 1ull, 42ull}) {
    auto a = isotropic_chain(7, 4, seed);
    auto b = isotropic_chain(7, 4, seed);
    EXPECT_EQ(a.vectors(), b.vectors());
    expect_extremal(a, 49);
  }
  EXPECT_NE(isotropic_chain(7, 4, 1).sorted().vectors(), isotropic_chain(7, 4, 0).sorted().vectors());
}

TEST(PerfectSquare, Examples) {
  EXPECT_EQ(perfect_square(2, 1), ModFamily(4, 1, {{0}, {2}}));
  expect_extremal(perfect_square(2, 3), 8);
  expect_extremal(perfect_square(3, 2), 9);
  expect_extremal(perfect_square(5, 3), 125);
  EXPECT_THROW(perfect_square(1, 2), ParameterError);
}

TEST(Crt, Examples) {
  auto f = crt_compose(eventown_pairing(2), perfect_square(3, 2));
  EXPECT_EQ(f.k(), 18);
  expect_extremal(f, 18);

  auto g = crt_compose(perfect_square(2, 1), perfect_square(3, 1));
  EXPECT_EQ(g.k(), 36);
  expect_extremal(g, 6);

  // A trivial first component embeds the second one: x -> p * (p^{-1} x mod q).
  auto zero = ModFamily(2, 2, {{0, 0}});
  auto q = perfect_square(3, 2);
  auto lift = crt_compose(zero, q);
  EXPECT_EQ(lift.size(), q.size());
  for (const auto& v : lift)
    for (auto x : v) {
      EXPECT_EQ(x % 2, 0);
      EXPECT_EQ(x % 3, 0);
    }

  EXPECT_THROW(crt_compose(perfect_square(2, 1), eventown_pairing(1)), ParameterError);
  EXPECT_THROW(crt_compose(eventown_pairing(2), perfect_square(3, 1)), DimensionError);
}

TEST(Crt, SizeIsMultiplicative) {
  for (int n : {1, 2, 3}) {
    auto a = extremal_family(4, n);
    auto b = extremal_family(9, n);
    auto c = crt_compose(a, b);
    EXPECT_EQ(c.size(), a.size() * b.size());
    EXPECT_TRUE(is_town(c, 0));
  }
}

TEST(ExtremalFamily, Dispatch) {
  EXPECT_EQ(extremal_family(2, 4).size(), 4u);
  EXPECT_EQ(extremal_family(13, 2).size(), 13u);
  EXPECT_EQ(extremal_family(7, 4).size(), 49u);
  EXPECT_EQ(extremal_family(16, 1).size(), 4u);
  EXPECT_EQ(extremal_family(10, 2).size(), 10u);
  expect_extremal(extremal_family(45, 2), 45);
  EXPECT_THROW(extremal_family(3, 3), ParameterError);

  ConstructionSpec spec;
  spec.kind = ConstructionKind::Crt;
  spec.p = 4;
  spec.q = 9;
  spec.n = 1;
  expect_extremal(build(spec), 6);
  EXPECT_THROW(parse_construction_kind("nope"), ParameterError);
}

TEST(SpanFamily, CapAndZeroGenerators) {
  EXPECT_EQ(span_family(5, 3, {}).size(), 1u);
  EXPECT_THROW(span_family(101, 4, {{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}}), ResourceError);
}

TEST(LinearAlgebraMod, RankAndComplement) {
  const std::int64_t p = 7;
  EXPECT_EQ(linalg::rank({{1, 2, 3}, {2, 4, 6}}, p), 1u);
  EXPECT_EQ(linalg::rank({{1, 2, 3}, {0, 1, 1}}, p), 2u);
  auto perp = linalg::orthogonal_complement({{1, 2, 3}}, 3, p);
  ASSERT_EQ(perp.size(), 2u);
  for (const auto& v : perp) EXPECT_EQ(dot(v, ResidueVector{1, 2, 3}, p), 0);
  EXPECT_TRUE(linalg::in_span({2, 4, 6}, {{1, 2, 3}}, p));
  EXPECT_FALSE(linalg::in_span({1, 0, 0}, {{1, 2, 3}}, p));
  auto comp = linalg::complement_basis({{1, 2, 3}}, {{1, 2, 3}, {2, 4, 6}, {1, 0, 0}}, p);
  EXPECT_EQ(comp, (std::vector<ResidueVector>{{1, 0, 0}}));
}
