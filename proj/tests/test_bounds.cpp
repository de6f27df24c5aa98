#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "etlab/bounds.hpp"
#include "etlab/constructions.hpp"
#include "oracles.hpp"

using namespace etlab;

namespace {

const double kInvSqrt2 = std::numbers::sqrt2 / 2.0;

}  // namespace

TEST(Lovasz, OrthogonalityGraphExamples) {
  struct Case {
    std::int64_t k;
    int n;
    double lambda;
    std::int64_t alpha;
  };
  for (auto c : {Case{2, 2, 2.0, 2}, Case{3, 2, 3.0, 1}, Case{2, 4, 4.0, 4}}) {
    auto r = lovasz_bound(c.k, c.n, 0);
    ASSERT_TRUE(r.value.has_value());
    EXPECT_NEAR(*r.value, c.lambda, 1e-9);
    EXPECT_EQ(r.extras["oracle_alpha"], c.alpha);
    EXPECT_EQ(static_cast<std::size_t>(c.alpha), oracle::max_town(c.k, c.n, 0));
    ASSERT_TRUE(r.certified_against.has_value());
    EXPECT_TRUE(r.certified_against->pass);
  }
}

TEST(Lovasz, ShiftedTargetsUseTheConjugatePhase) {
  for (std::int64_t k : {3, 5})
    for (Residue t = 1; t < k; ++t) {
      auto r = lovasz_bound(k, 2, t);
      EXPECT_TRUE(r.certified_against->pass);
      EXPECT_NEAR(*r.value, r.extras["closed_form_lambda_max"].get<double>(), 1e-9);
    }
}

TEST(Lovasz, MalformedWitnessListsOffendingEntries) {
  const auto g = orthogonality_graph(2, 2, 0).explicit_graph();
  try {
    lovasz_bound(RealMatrix::identity(4), g);
    FAIL() << "expected HypothesisError";
  } catch (const HypothesisError& e) {
    EXPECT_NE(std::string(e.what()).find("(0,1)"), std::string::npos);
  }
  EXPECT_THROW(lovasz_bound(RealMatrix::identity(3), g), DimensionError);
  // The same-sign phase is not a witness for t = 1 over Z/3.
  const auto g31 = orthogonality_graph(3, 1, 1).explicit_graph();
  EXPECT_THROW(lovasz_bound(realize_dense(3, 1, 1), g31), HypothesisError);
}

TEST(Singular, Examples) {
  auto r = singular_bound(3, 2, 0);
  EXPECT_NEAR(*r.value, 3.0, 1e-9);
  EXPECT_EQ(r.extras["oracle_alpha"], 1);
  EXPECT_TRUE(r.certified_against->pass);

  Graph single(1);
  ComplexMatrix one(1, 1, {1.0, 0.0});
  auto s = singular_bound(one, single);
  EXPECT_NEAR(*s.value, 1.0, 1e-12);
  EXPECT_TRUE(s.certified_against->pass);
}

TEST(Supersaturation, Examples) {
  auto zero = supersaturation_bound(3.7, -0.5, Rational(0));
  EXPECT_DOUBLE_EQ(*zero.value, 3.7);

  auto six = supersaturation_bound(Rational(3), Rational(-1, 2), Rational(1, 3));
  EXPECT_EQ(*six.exact, Rational(6));

  for (int n : {2, 4, 6})
    for (auto eps : {Rational(0), Rational(1, 10), Rational(1, 4)}) {
      auto r = supersaturation_bound(Rational(ipow(2, n / 2)), Rational(-1), eps);
      EXPECT_EQ(*r.exact, Rational(ipow(2, n / 2)) / (Rational(1) - Rational(2) * eps));
    }

  auto bad = supersaturation_bound(Rational(3), Rational(-1), Rational(1, 2));
  EXPECT_FALSE(bad.preconditions_ok);
  EXPECT_FALSE(bad.value.has_value());
  EXPECT_FALSE(supersaturation_bound(3.0, 0.0, Rational(-1, 10)).preconditions_ok);
}

TEST(Supersaturation, ZeroEpsilonReducesToLovasz) {
  for (std::int64_t k : {2, 3, 5}) {
    auto l = lovasz_bound(k, 2, 0);
    auto s = supersaturation_bound(*l.inputs.lambda_max, *l.inputs.c, Rational(0));
    EXPECT_DOUBLE_EQ(*s.value, *l.value);
  }
}

TEST(Cross, Examples) {
  EXPECT_DOUBLE_EQ(*cross_bound(2.5, -1.0, Rational(0)).value, 6.25);
  // I = J = {(0,0),(1,1)} in the k = 2, n = 2 graph: no edges between them.
  auto r = cross_bound(Rational(2), Rational(-1), Rational(0));
  const std::vector<oracle::Vec> part{{0, 0}, {1, 1}};
  int edges = 0;
  for (const auto& x : part)
    for (const auto& y : part) edges += oracle::dot(x, y, 2) != 0;
  EXPECT_EQ(edges, 0);
  EXPECT_TRUE(certify(r, 4.0, "|I||J|"));
  EXPECT_EQ(*r.exact, Rational(4));
}

TEST(EventownOp, Examples) {
  auto a = eventown_op_bound(6, 4);
  EXPECT_EQ(*a.exact, Rational(8));
  EXPECT_EQ(a.extras["oneill_target"], "16");
  EXPECT_EQ(a.direction, BoundDirection::Lower);

  auto b = eventown_op_bound(4, 1);
  EXPECT_EQ(*b.exact, Rational(1));
  EXPECT_GE(oracle::min_op(4, 5), 1);

  EXPECT_EQ(*eventown_op_bound(4, 0).exact, Rational(0));
  EXPECT_FALSE(eventown_op_bound(5, 1).preconditions_ok);
}

TEST(EventownOp, BelowOracleMinimum) {
  for (int n : {2, 4})
    for (int s : {1, 2}) {
      auto r = eventown_op_bound(n, s);
      const auto size = static_cast<int>(ipow(2, n / 2)) + s;
      const auto v = oracle::min_op(n, size);
      if (size > (1 << (n - 1))) {
        // Fewer than `size` even-size subsets exist: the statement is vacuous.
        EXPECT_EQ(v, -1);
        continue;
      }
      EXPECT_TRUE(certify(r, static_cast<double>(v), "oracle min op")) << n << " " << s << " v=" << v;
    }
}

TEST(Ktown, Examples) {
  EXPECT_EQ(*ktown_bound(4, 3).exact, Rational(8));
  EXPECT_EQ(*ktown_bound(2, 4).exact, Rational(4));
  auto r = ktown_bound(3, 2);
  EXPECT_EQ(*r.exact, Rational(3));
  EXPECT_EQ(oracle::max_town(3, 2, 0), 1u);
  EXPECT_NEAR(*ktown_bound(2, 3).value, std::pow(2.0, 1.5), 1e-12);
  EXPECT_FALSE(ktown_bound(1, 3).preconditions_ok);
}

TEST(KtownSupersat, Examples) {
  EXPECT_EQ(*ktown_supersat_bound(7, 2, Rational(0)).exact, Rational(7));
  EXPECT_EQ(*ktown_supersat_bound(3, 4, Rational(1, 3)).exact, Rational(18));
  EXPECT_EQ(*ktown_supersat_bound(7, 4, Rational(1, 10)).exact, Rational(2940, 53));

  auto fam = isotropic_chain(3, 4);
  auto stats = pair_stats(fam, 0);
  auto r = ktown_supersat_bound(3, 4, stats.epsilon_ordered);
  EXPECT_TRUE(certify(r, static_cast<double>(fam.size()), "|F|"));
  EXPECT_EQ(fam.size(), 9u);

  EXPECT_FALSE(ktown_supersat_bound(3, 4, Rational(2, 3)).preconditions_ok);
  EXPECT_FALSE(ktown_supersat_bound(4, 4, Rational(0)).preconditions_ok);
}

TEST(Bounds, MonotoneInEpsilon) {
  std::vector<Rational> grid;
  for (int i = 0; i < 60; ++i) grid.push_back(Rational(i, 100));
  auto nondecreasing = [&](auto f) {
    double prev = -INFINITY;
    for (auto e : grid) {
      auto r = f(e);
      if (!r.value) continue;
      EXPECT_GE(*r.value, prev);
      prev = *r.value;
    }
  };
  nondecreasing([](Rational e) { return supersaturation_bound(4.0, -0.5, e); });
  nondecreasing([](Rational e) { return cross_bound(Rational(3), Rational(1, 2), e); });
  nondecreasing([](Rational e) { return ktown_supersat_bound(5, 2, e); });
  nondecreasing([](Rational e) { return shifted_supersat_bound(7, 2, 3, e); });
  nondecreasing([](Rational e) { return hart_iosevich_bound(5, 3, e); });
}

TEST(CConstant, Examples) {
  for (std::int64_t k : {2, 5, 8, 12}) EXPECT_DOUBLE_EQ(c_constant(0, k), 1.0);
  EXPECT_NEAR(c_constant(1, 8), kInvSqrt2, 1e-15);
  EXPECT_TRUE(c_constant_detail(1, 8).attains_lower_limit);
  EXPECT_DOUBLE_EQ(c_constant(1, 4), 1.0);
  EXPECT_THROW(c_constant(5, 5), ParameterError);
}

TEST(CConstant, MatchesOracleAndStaysInRange) {
  for (std::int64_t k = 2; k <= 64; ++k) {
    const auto table = c_constant_table(k);
    for (Residue t = 1; t < k; ++t) {
      EXPECT_NEAR(table[t].value, static_cast<double>(oracle::c_constant(t, k)), 1e-12) << t << " " << k;
      EXPECT_GE(table[t].value, kInvSqrt2 - 1e-12);
      EXPECT_LE(table[t].value, 1.0);
    }
  }
}

TEST(CAverage, Examples) {
  auto direct = [](std::int64_t k) {
    long double s = 0;
    for (std::int64_t a = 1; a < k; ++a) {
      const long double x = 2.0L * std::numbers::pi_v<long double> * a / k;
      s += std::max(std::abs(std::cos(x)), std::abs(std::sin(x)));
    }
    return static_cast<double>(s / (k - 1));
  };
  EXPECT_NEAR(c_average(5, 1), direct(5), 1e-12);
  EXPECT_NEAR(c_average(5, 1), 0.8800, 5e-5);
  EXPECT_NEAR(c_average(3, 1), std::sqrt(3.0) / 2.0, 1e-12);
  EXPECT_NEAR(c_average(10007, 1), kCAverageLimit, 1e-3);
  EXPECT_NEAR(kCAverageLimit, 0.900316, 1e-6);
  // t only permutes the summands over a prime modulus.
  EXPECT_NEAR(c_average(11, 4), c_average(11, 1), 1e-12);
  EXPECT_THROW(c_average(5, 0), ParameterError);
  EXPECT_THROW(c_average(9, 1), ParameterError);
}

TEST(Shifted, Examples) {
  auto r = shifted_supersat_bound(5, 2, 1, Rational(0));
  EXPECT_NEAR(*r.value, 5 * c_average(5, 1), 1e-12);
  EXPECT_NEAR(*r.value, 4.40, 5e-3);

  auto s = shifted_supersat_bound(3, 2, 1, Rational(0));
  EXPECT_NEAR(*s.value, 2.598, 1e-3);
  const auto alpha = oracle::max_town(3, 2, 1);
  EXPECT_LE(alpha, 2u);
  EXPECT_TRUE(certify(s, static_cast<double>(alpha), "oracle"));

  auto big = shifted_supersat_bound(10007, 2, 1, Rational(0));
  EXPECT_NEAR(*big.value / 10007.0, kCAverageLimit, 1e-3);

  EXPECT_FALSE(shifted_supersat_bound(5, 2, 0, Rational(0)).preconditions_ok);
}

TEST(Distance, Examples) {
  EXPECT_EQ(*distance_bound(5, 2, 1).exact, Rational(6));
  EXPECT_EQ(*distance_bound(3, 2, 2).exact, Rational(25));
  EXPECT_FALSE(distance_bound(5, 2, 5).preconditions_ok);
  EXPECT_FALSE(distance_bound(2, 2, 1).preconditions_ok);
  EXPECT_LE(oracle::max_single_distance(5, 2), 6u);
}

TEST(HartIosevich, Examples) {
  auto r = hart_iosevich_bound(101, 2, Rational(0));
  EXPECT_NEAR(*r.value, 10.1504, 1e-3);
  EXPECT_LT(*r.value, *ktown_bound(101, 2).value);
  EXPECT_EQ(r.extras["smaller"], "hart_iosevich");
  EXPECT_NEAR(*hart_iosevich_bound(3, 2, Rational(0)).value, 2.598, 1e-3);
  auto edge = hart_iosevich_bound(5, 2, Rational(4, 5));
  EXPECT_FALSE(edge.preconditions_ok);
  EXPECT_FALSE(edge.value.has_value());
}

TEST(Discrepancy, Examples) {
  auto all = discrepancy_check(2, {0, 1, 2, 3}, {0, 1, 2, 3});
  EXPECT_EQ(all.disc, 4);
  EXPECT_TRUE(all.ok());
  auto one = discrepancy_check(1, {0}, {0});
  EXPECT_EQ(one.disc, 1);
  EXPECT_TRUE(one.ok());
  EXPECT_THROW(discrepancy_check(2, {}, {0}), ParameterError);
  EXPECT_THROW(discrepancy_check(2, {4}, {0}), ParameterError);
}

TEST(Discrepancy, ExhaustiveSmall) {
  for (int n : {1, 2}) {
    const unsigned size = 1u << n;
    for (unsigned im = 1; im < (1u << size); ++im)
      for (unsigned jm = 1; jm < (1u << size); ++jm) {
        std::vector<std::uint64_t> rows, cols;
        for (unsigned i = 0; i < size; ++i) {
          if (im >> i & 1) rows.push_back(i);
          if (jm >> i & 1) cols.push_back(i);
        }
        auto r = discrepancy_check(n, rows, cols);
        EXPECT_TRUE(r.ok());
        // disc = |I||J|(1 - 2 eps)
        EXPECT_EQ(Rational(r.disc), Rational(static_cast<std::int64_t>(rows.size() * cols.size())) *
                                        (Rational(1) - Rational(2) * r.eps));
      }
  }
}

TEST(Certify, ExactIntegerComparison) {
  auto r = ktown_bound(5, 2);
  EXPECT_TRUE(certify(r, 5.0, "|F|"));
  EXPECT_FALSE(certify(r, 6.0, "|F|"));
  auto j = to_json(r);
  EXPECT_EQ(j["certified_against"]["pass"], false);
  EXPECT_EQ(j["exact"], "5");
}
