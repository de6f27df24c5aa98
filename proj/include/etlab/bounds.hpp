#pragma once

// Evaluators for the spectral size bounds on independent sets, eventown and
// k-town families, and certifiers that hold a bound against a concrete family
// size or an oracle optimum.
//
// Precondition failures never throw: the report carries preconditions_ok =
// false, the list of violated conditions, and no value. Malformed matrices
// (a witness that is not 1 on non-edges) throw HypothesisError.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "etlab/dense.hpp"
#include "etlab/errors.hpp"
#include "etlab/format.hpp"
#include "etlab/graph.hpp"
#include "etlab/numtheory.hpp"
#include "etlab/rational.hpp"
#include "etlab/search.hpp"
#include "etlab/spectral.hpp"

namespace etlab {

enum class BoundDirection { Upper, Lower };

struct BoundInputs {
  std::optional<std::int64_t> k;
  std::optional<int> n;
  std::optional<Residue> t;
  std::optional<Rational> eps;
  std::optional<std::int64_t> s;
  std::optional<double> c;
  std::optional<double> lambda_max;
  std::optional<double> rho;
};

struct Certification {
  std::string witness;
  double witness_value = 0.0;
  bool pass = false;
};

struct BoundReport {
  std::string name;
  BoundDirection direction = BoundDirection::Upper;
  BoundInputs inputs;
  std::optional<double> value;
  std::optional<Rational> exact;
  bool preconditions_ok = true;
  std::vector<std::string> violated;
  std::optional<Certification> certified_against;
  nlohmann::json extras = nlohmann::json::object();

  void fail(std::string why) {
    preconditions_ok = false;
    violated.push_back(std::move(why));
    value.reset();
    exact.reset();
  }
  void set_exact(Rational r) {
    exact = r;
    value = r.to_double();
  }
};

/// Holds `witness` against the bound in its direction. Integers compare
/// exactly against an exact value; otherwise a relative slack of 1e-12 applies.
inline bool certify(BoundReport& report, double witness, std::string label) {
  Certification c{std::move(label), witness, false};
  if (report.value) {
    const bool upper = report.direction == BoundDirection::Upper;
    if (report.exact && witness == std::floor(witness) && std::abs(witness) < 9e15) {
      const Rational w(static_cast<std::int64_t>(witness));
      c.pass = upper ? w <= *report.exact : w >= *report.exact;
    } else {
      const double slack = 1e-12 * std::max(1.0, std::abs(*report.value));
      c.pass = upper ? witness <= *report.value + slack : witness >= *report.value - slack;
    }
  }
  report.certified_against = c;
  return c.pass;
}

inline nlohmann::json to_json(const BoundReport& r) {
  nlohmann::json in = nlohmann::json::object();
  if (r.inputs.k) in["k"] = *r.inputs.k;
  if (r.inputs.n) in["n"] = *r.inputs.n;
  if (r.inputs.t) in["t"] = *r.inputs.t;
  if (r.inputs.eps) in["eps"] = r.inputs.eps->str();
  if (r.inputs.s) in["s"] = *r.inputs.s;
  if (r.inputs.c) in["c"] = round_sig(*r.inputs.c);
  if (r.inputs.lambda_max) in["lambda_max"] = round_sig(*r.inputs.lambda_max);
  if (r.inputs.rho) in["rho"] = round_sig(*r.inputs.rho);
  nlohmann::json j = {{"name", r.name},
                      {"direction", r.direction == BoundDirection::Upper ? "upper" : "lower"},
                      {"inputs", in},
                      {"preconditions_ok", r.preconditions_ok},
                      {"violated", r.violated}};
  j["value"] = r.value ? nlohmann::json(round_sig(*r.value)) : nlohmann::json(nullptr);
  j["exact"] = r.exact ? nlohmann::json(r.exact->str()) : nlohmann::json(nullptr);
  if (r.certified_against) {
    j["certified_against"] = {{"witness", r.certified_against->witness},
                              {"value", round_sig(r.certified_against->witness_value)},
                              {"pass", r.certified_against->pass}};
  } else {
    j["certified_against"] = nullptr;
  }
  if (!r.extras.empty()) j["extras"] = r.extras;
  return j;
}

/// k^{n/2} exactly, when it is an integer (n even or k a perfect square).
inline std::optional<std::int64_t> exact_half_power(std::int64_t k, int n) {
  try {
    if (n % 2 == 0) return ipow(k, n / 2);
    if (auto r = exact_sqrt(k)) return ipow(*r, n);
  } catch (const std::overflow_error&) {
  }
  return std::nullopt;
}

inline double half_power(std::int64_t k, double n) { return std::pow(static_cast<double>(k), 0.5 * n); }

// ---------------------------------------------------------------------------
// Independence-number bounds from a witness matrix

struct OracleOptions {
  bool certify = true;
  std::uint64_t oracle_cap = 256;  // largest graph the independent-set oracle is run on
  std::uint64_t budget = kDefaultSearchBudget;
};

namespace detail {

template <class T>
void check_witness(const Matrix<T>& a, const Graph& g, const char* who) {
  if (!a.square() || a.rows() != g.vertex_count())
    throw DimensionError(std::string(who) + ": matrix size does not match the graph");
  std::string offending;
  int found = 0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = i; j < a.cols(); ++j) {
      if (g.adjacent(i, j)) continue;
      if (std::abs(a(i, j) - T{1}) > 1e-12 || std::abs(a(j, i) - T{1}) > 1e-12) {
        if (found < 8) offending += " (" + std::to_string(i) + "," + std::to_string(j) + ")";
        ++found;
      }
    }
  if (found > 0)
    throw HypothesisError(std::string(who) + ": entries not equal to 1 on " + std::to_string(found) +
                          " non-adjacent pairs:" + offending);
}

inline void attach_oracle(BoundReport& r, const Graph& g, const OracleOptions& opts) {
  if (!opts.certify || g.vertex_count() > opts.oracle_cap) return;
  auto alpha = max_independent_set(g, opts.budget);
  if (!alpha.exhaustive) return;
  certify(r, static_cast<double>(alpha.optimum), "oracle alpha(G)");
  r.extras["oracle_alpha"] = alpha.optimum;
}

}  // namespace detail

/// alpha(G) <= lambda_max(N) for a symmetric N equal to 1 on every non-edge
/// (the diagonal of every loop-free vertex included).
inline BoundReport lovasz_bound(const RealMatrix& matrix, const Graph& g, const OracleOptions& opts = {}) {
  detail::check_witness(matrix, g, "lovasz_bound");
  BoundReport r;
  r.name = "lovasz";
  const auto eig = jacobi_eigen(matrix);
  double c = INFINITY;
  for (std::size_t i = 0; i < matrix.rows(); ++i)
    for (std::size_t j = 0; j < matrix.cols(); ++j) c = std::min(c, matrix(i, j));
  r.inputs.lambda_max = eig.values.empty() ? 0.0 : eig.values.back();
  r.inputs.c = c;
  r.value = r.inputs.lambda_max;
  r.extras["max_residual"] = round_sig(eig.max_residual());
  detail::attach_oracle(r, g, opts);
  return r;
}

/// The explicit witness for the t-town graph: Re(phi^{-t} A^{(x)n}).
inline BoundReport lovasz_bound(std::int64_t k, int n, Residue t, const OracleOptions& opts = {},
                                std::uint64_t cap = kDefaultDenseCap) {
  const OrthogonalityGraph og(k, n, t);
  auto r = lovasz_bound(realize_dense(k, n, witness_shift(k, t), cap), og.explicit_graph(cap), opts);
  r.inputs.k = k;
  r.inputs.n = n;
  r.inputs.t = t;
  r.extras["closed_form_lambda_max"] = round_sig(closed_form_spectrum(k, n, witness_shift(k, t)).lambda_max());
  return r;
}

/// alpha(G) <= sigma_max(A) for a complex A equal to 1 on every non-edge.
inline BoundReport singular_bound(const ComplexMatrix& matrix, const Graph& g, const OracleOptions& opts = {}) {
  detail::check_witness(matrix, g, "singular_bound");
  BoundReport r;
  r.name = "singular";
  const auto sv = singular_values(matrix);
  r.value = sv.empty() ? 0.0 : sv.front();
  r.inputs.rho = r.value;
  detail::attach_oracle(r, g, opts);
  return r;
}

inline BoundReport singular_bound(std::int64_t k, int n, Residue t, const OracleOptions& opts = {},
                                  std::uint64_t cap = kDefaultDenseCap) {
  const OrthogonalityGraph og(k, n, t);
  auto r = singular_bound(realize_dense_complex(k, n, witness_shift(k, t), cap), og.explicit_graph(cap), opts);
  r.inputs.k = k;
  r.inputs.n = n;
  r.inputs.t = t;
  r.extras["closed_form_sigma_max"] = round_sig(half_power(k, n));
  return r;
}

// ---------------------------------------------------------------------------
// Supersaturation and cross bounds

namespace detail {

inline BoundReport supersat_common(const char* name, double scale, double c, Rational eps, bool squared) {
  BoundReport r;
  r.name = name;
  r.inputs.c = c;
  r.inputs.eps = eps;
  const double damping = (1.0 - c) * eps.to_double();
  if (eps < Rational(0)) r.fail("eps >= 0");
  if (!(damping < 1.0)) r.fail("(1 - c) * eps < 1");
  if (!r.preconditions_ok) return r;
  const double v = scale / (1.0 - damping);
  r.value = squared ? v * v : v;
  return r;
}

inline BoundReport supersat_common_exact(const char* name, Rational scale, Rational c, Rational eps, bool squared) {
  BoundReport r;
  r.name = name;
  r.inputs.c = c.to_double();
  r.inputs.eps = eps;
  const Rational denom = Rational(1) - (Rational(1) - c) * eps;
  if (eps < Rational(0)) r.fail("eps >= 0");
  if (!(denom > Rational(0))) r.fail("(1 - c) * eps < 1");
  if (!r.preconditions_ok) return r;
  const Rational v = scale / denom;
  r.set_exact(squared ? v * v : v);
  return r;
}

}  // namespace detail

/// |I| <= lambda_max / (1 - (1 - c) eps) for a set with at most eps |I|^2 ordered violating pairs.
inline BoundReport supersaturation_bound(double lambda_max, double c, Rational eps) {
  auto r = detail::supersat_common("supersaturation", lambda_max, c, eps, false);
  r.inputs.lambda_max = lambda_max;
  return r;
}

inline BoundReport supersaturation_bound(Rational lambda_max, Rational c, Rational eps) {
  auto r = detail::supersat_common_exact("supersaturation", lambda_max, c, eps, false);
  r.inputs.lambda_max = lambda_max.to_double();
  return r;
}

/// |I| |J| <= (rho / (1 - (1 - c) eps))^2 for at most eps |I| |J| edges between I and J.
inline BoundReport cross_bound(double rho, double c, Rational eps) {
  auto r = detail::supersat_common("cross", rho, c, eps, true);
  r.inputs.rho = rho;
  return r;
}

inline BoundReport cross_bound(Rational rho, Rational c, Rational eps) {
  auto r = detail::supersat_common_exact("cross", rho, c, eps, true);
  r.inputs.rho = rho.to_double();
  return r;
}

// ---------------------------------------------------------------------------
// Eventown and k-town bounds

/// Lower bound op(F) >= s 2^{n/2 - 2} for |F| = 2^{n/2} + s, n even.
inline BoundReport eventown_op_bound(int n, std::int64_t s) {
  BoundReport r;
  r.name = "eventown_op";
  r.direction = BoundDirection::Lower;
  r.inputs.n = n;
  r.inputs.s = s;
  r.inputs.k = 2;
  if (n < 1) r.fail("n >= 1");
  if (n % 2 != 0) r.fail("n even (odd n unsupported)");
  if (s < 0) r.fail("s >= 0");
  if (!r.preconditions_ok) return r;
  const int half = n / 2;
  // s * 2^{half - 2}, exact for half < 2 as well.
  const Rational v = half >= 2 ? Rational(s * ipow(2, half - 2)) : Rational(s, ipow(2, 2 - half));
  r.set_exact(v);
  const Rational target = half >= 1 ? Rational(s * ipow(2, half - 1)) : Rational(s, 2);
  r.extras["oneill_target"] = target.str();
  r.extras["family_size"] = ipow(2, half) + s;
  return r;
}

/// |F| <= k^{n/2} for any k-town family.
inline BoundReport ktown_bound(std::int64_t k, int n) {
  BoundReport r;
  r.name = "ktown";
  r.inputs.k = k;
  r.inputs.n = n;
  if (k < 2) r.fail("k >= 2");
  if (n < 1) r.fail("n >= 1");
  if (!r.preconditions_ok) return r;
  if (auto e = exact_half_power(k, n))
    r.set_exact(Rational(*e));
  else
    r.value = half_power(k, n);
  return r;
}

/// |F| <= k^{n/2} / (1 - k/(k-1) eps) for prime k and at most eps |F|^2 ordered bad pairs.
inline BoundReport ktown_supersat_bound(std::int64_t k, int n, Rational eps) {
  BoundReport r;
  r.name = "ktown_supersat";
  r.inputs.k = k;
  r.inputs.n = n;
  r.inputs.eps = eps;
  if (!is_prime(k)) r.fail("k prime");
  if (n < 1) r.fail("n >= 1");
  if (eps < Rational(0)) r.fail("eps >= 0");
  if (k >= 2 && !(eps < Rational(k - 1, k))) r.fail("eps < (k-1)/k");
  if (!r.preconditions_ok) return r;
  const Rational denom = Rational(1) - Rational(k, k - 1) * eps;
  if (auto e = exact_half_power(k, n))
    r.set_exact(Rational(*e) / denom);
  else
    r.value = half_power(k, n) / denom.to_double();
  return r;
}

/// max(|cos x|, |sin x|): the largest of |cos(x + l pi/2)| over l = 0..3.
inline double quarter_turn_max(double angle) { return std::max(std::abs(std::cos(angle)), std::abs(std::sin(angle))); }

/// f(m) = quarter_turn_max(2 pi m / k) for m = 0..k-1.
inline std::vector<double> quarter_turn_table(std::int64_t k) {
  std::vector<double> f(static_cast<std::size_t>(k));
  for (std::int64_t m = 0; m < k; ++m)
    f[static_cast<std::size_t>(m)] =
        std::max(std::abs(unit_root_real(m, k)), std::abs(unit_root_real(4 * m - k, 4 * k)));
  return f;
}

struct CConstant {
  double value = 1.0;
  Residue unit = 1;          // a minimizing unit r
  bool attains_lower_limit = false;  // value equals 1/sqrt(2) within 1e-12
};

/// c(t, k) for every t in [0, k): minimum over units r of the quarter-turn
/// maximum at t r^2.
inline std::vector<CConstant> c_constant_table(std::int64_t k) {
  if (k < 2) throw ParameterError("c_constant: k must be >= 2");
  const auto f = quarter_turn_table(k);
  std::vector<std::pair<Residue, Residue>> squares;  // (r^2 mod k, r)
  for (Residue r = 1; r < k; ++r)
    if (std::gcd(r, k) == 1) squares.emplace_back(mod(r * r, k), r);
  std::vector<CConstant> out(static_cast<std::size_t>(k));
  for (Residue t = 0; t < k; ++t) {
    CConstant best;
    best.value = INFINITY;
    for (auto [sq, r] : squares) {
      const double v = f[static_cast<std::size_t>(mod(t * sq, k))];
      if (v < best.value) {
        best.value = v;
        best.unit = r;
      }
    }
    if (squares.empty()) best.value = f[static_cast<std::size_t>(t)];  // unreachable for k >= 2; r = 1 is a unit
    best.attains_lower_limit = std::abs(best.value - std::numbers::sqrt2 / 2.0) <= 1e-12;
    out[static_cast<std::size_t>(t)] = best;
  }
  return out;
}

inline CConstant c_constant_detail(Residue t, std::int64_t k) {
  if (k < 2) throw ParameterError("c_constant: k must be >= 2");
  if (t < 0 || t >= k) throw ParameterError("c_constant: t must lie in [0, k-1]");
  return c_constant_table(k)[static_cast<std::size_t>(t)];
}

inline double c_constant(Residue t, std::int64_t k) { return c_constant_detail(t, k).value; }

/// (1/(k-1)) sum_{a=1}^{k-1} max_l |cos(2 pi t a / k + l pi / 2)|.
inline double c_average(std::int64_t k, Residue t) {
  if (!is_prime(k)) throw ParameterError("c_average: k must be prime");
  if (mod(t, k) == 0) throw ParameterError("c_average: t must be nonzero mod k");
  const auto f = quarter_turn_table(k);
  double sum = 0.0;
  for (std::int64_t a = 1; a < k; ++a) sum += f[static_cast<std::size_t>(mod(t * a, k))];
  return sum / static_cast<double>(k - 1);
}

inline constexpr double kCAverageLimit = 2.0 * std::numbers::sqrt2 / std::numbers::pi;

/// |F| <= c(k) k^{n/2} / (1 - k/(k-1) eps) for families whose products equal t != 0 up to eps.
inline BoundReport shifted_supersat_bound(std::int64_t k, int n, Residue t, Rational eps) {
  BoundReport r;
  r.name = "shifted_supersat";
  r.inputs.k = k;
  r.inputs.n = n;
  r.inputs.t = t;
  r.inputs.eps = eps;
  if (!is_prime(k)) r.fail("k prime");
  if (n < 1) r.fail("n >= 1");
  if (k >= 2 && mod(t, k) == 0) r.fail("t != 0 mod k");
  if (eps < Rational(0)) r.fail("eps >= 0");
  if (k >= 2 && !(eps < Rational(k - 1, k))) r.fail("eps < (k-1)/k");
  if (!r.preconditions_ok) return r;
  const double c = c_average(k, t);
  r.inputs.c = c;
  const Rational denom = Rational(1) - Rational(k, k - 1) * eps;
  r.value = c * half_power(k, n) / denom.to_double();
  r.extras["c_average_limit"] = round_sig(kCAverageLimit);
  return r;
}

/// |E| <= s^2 (k-1) k^{n/2} / (k - s) + 1 for a point set with s distinct distances.
inline BoundReport distance_bound(std::int64_t k, int n, std::int64_t s) {
  BoundReport r;
  r.name = "distance";
  r.inputs.k = k;
  r.inputs.n = n;
  r.inputs.s = s;
  if (!is_prime(k) || k == 2) r.fail("k odd prime");
  if (n < 1) r.fail("n >= 1");
  if (s < 1 || s >= k) r.fail("1 <= s < k");
  if (!r.preconditions_ok) return r;
  const Rational coef(s * s * (k - 1), k - s);
  if (auto e = exact_half_power(k, n))
    r.set_exact(coef * Rational(*e) + Rational(1));
  else
    r.value = coef.to_double() * half_power(k, n) + 1.0;
  if (s == k - 1) r.extras["scale_remark"] = round_sig(half_power(k, n + 6));
  r.extras["comparison"] = "Iosevich-Rudnev: C k^((n+1)/2), absolute constant C (not evaluated)";
  return r;
}

/// |F| <= k^{(n-1)/2} / ((k-1)/k - eps), the comparator for t != 0.
inline BoundReport hart_iosevich_bound(std::int64_t k, int n, Rational eps) {
  BoundReport r;
  r.name = "hart_iosevich";
  r.inputs.k = k;
  r.inputs.n = n;
  r.inputs.eps = eps;
  if (!is_prime(k)) r.fail("k prime");
  if (n < 1) r.fail("n >= 1");
  if (eps < Rational(0)) r.fail("eps >= 0");
  if (k >= 2 && !(eps < Rational(k - 1, k))) r.fail("eps < (k-1)/k (bound diverges at the boundary)");
  r.extras["requires"] = "t != 0";
  if (!r.preconditions_ok) return r;
  const Rational denom = Rational(k - 1, k) - eps;
  if (auto e = exact_half_power(k, n - 1); e && n > 1)
    r.set_exact(Rational(*e) / denom);
  else
    r.value = half_power(k, n - 1) / denom.to_double();
  const auto theirs = ktown_supersat_bound(k, n, eps);
  if (theirs.value) {
    r.extras["ktown_supersat_value"] = round_sig(*theirs.value);
    r.extras["smaller"] = *r.value < *theirs.value ? "hart_iosevich" : "ktown_supersat";
  }
  return r;
}

// ---------------------------------------------------------------------------
// Discrepancy of the Hadamard colouring

struct DiscrepancyReport {
  int n = 0;
  std::int64_t disc = 0;  // signed sum of H entries over I x J
  std::uint64_t size_i = 0;
  std::uint64_t size_j = 0;
  Rational eps;           // fraction of -1 entries in I x J
  bool spectral_ok = false;  // disc^2 <= 2^n |I| |J|
  bool cube_ok = false;      // 2^n |I| |J| <= N^3
  bool ok() const { return spectral_ok && cube_ok; }
};

/// Entry (i, j) of the 2^n x 2^n Hadamard tensor power: (-1)^{|i & j|}.
inline int hadamard_entry(std::uint64_t i, std::uint64_t j) { return (std::popcount(i & j) & 1) ? -1 : 1; }

inline DiscrepancyReport discrepancy_check(int n, const std::vector<std::uint64_t>& rows,
                                           const std::vector<std::uint64_t>& cols) {
  if (n < 1 || n > 20) throw ParameterError("discrepancy_check: n must lie in [1, 20]");
  if (rows.empty() || cols.empty()) throw ParameterError("discrepancy_check: I and J must be nonempty");
  const std::uint64_t size = std::uint64_t{1} << n;
  for (auto v : rows)
    if (v >= size) throw ParameterError("discrepancy_check: row index out of range");
  for (auto v : cols)
    if (v >= size) throw ParameterError("discrepancy_check: column index out of range");

  DiscrepancyReport r;
  r.n = n;
  r.size_i = rows.size();
  r.size_j = cols.size();
  std::int64_t negatives = 0;
  for (auto i : rows)
    for (auto j : cols) {
      const int h = hadamard_entry(i, j);
      r.disc += h;
      negatives += h < 0;
    }
  const auto cells = static_cast<std::int64_t>(r.size_i * r.size_j);
  r.eps = Rational(negatives, cells);
  const __int128 lhs = static_cast<__int128>(r.disc) * r.disc;
  const __int128 mid = static_cast<__int128>(size) * cells;
  const __int128 rhs = static_cast<__int128>(size) * size * size;
  r.spectral_ok = lhs <= mid;
  r.cube_ok = mid <= rhs;
  return r;
}

inline nlohmann::json to_json(const DiscrepancyReport& r) {
  return {{"n", r.n},           {"disc", r.disc},         {"size_i", r.size_i},         {"size_j", r.size_j},
          {"eps", r.eps.str()}, {"spectral_ok", r.spectral_ok}, {"cube_ok", r.cube_ok}};
}

}  // namespace etlab
