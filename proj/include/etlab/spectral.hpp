#pragma once

// The k x k phase matrix a_{jl} = phi^{jl} (phi = e^{2 pi i / k}), its
// implicit tensor powers M = A^{(x)n}, the real parts N = Re(phi^s M), their
// closed-form spectra, and the orthogonality graphs these matrices certify.
//
// Exponents mod k are the source of truth; complex and real values are
// realized on demand.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdlib>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "etlab/dense.hpp"
#include "etlab/errors.hpp"
#include "etlab/format.hpp"
#include "etlab/graph.hpp"
#include "etlab/modring.hpp"

namespace etlab {

inline constexpr std::uint64_t kDefaultDenseCap = 4096;

/// Dense cap, overridable through ETLAB_DENSE_CAP.
inline std::uint64_t dense_cap_from_env() {
  if (const char* env = std::getenv("ETLAB_DENSE_CAP")) {
    char* end = nullptr;
    auto v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return v;
  }
  return kDefaultDenseCap;
}

/// cos(2 pi e / k), exact at the points where the cosine is 0, +-1 or +-1/2.
inline double unit_root_real(Residue e, std::int64_t k) {
  e = mod(e, k);
  if (e == 0) return 1.0;
  if (2 * e == k) return -1.0;
  if (4 * e == k || 4 * e == 3 * k) return 0.0;
  if (6 * e == k || 6 * e == 5 * k) return 0.5;
  if (3 * e == k || 3 * e == 2 * k) return -0.5;
  return std::cos(2.0 * std::numbers::pi * static_cast<double>(e) / static_cast<double>(k));
}

/// phi^e = e^{2 pi i e / k}.
inline std::complex<double> unit_root(Residue e, std::int64_t k) {
  e = mod(e, k);
  // sin(2 pi e / k) = cos(2 pi (e - k/4) / k); realize both through the exact table when possible.
  double im;
  if (e == 0 || 2 * e == k) im = 0.0;
  else if (4 * e == k) im = 1.0;
  else if (4 * e == 3 * k) im = -1.0;
  else im = std::sin(2.0 * std::numbers::pi * static_cast<double>(e) / static_cast<double>(k));
  return {unit_root_real(e, k), im};
}

class PhaseMatrix {
 public:
  explicit PhaseMatrix(std::int64_t k) : k_(k) {
    if (k < 2) throw ParameterError("phase_matrix: k must be >= 2, got " + std::to_string(k));
  }

  std::int64_t k() const { return k_; }
  Residue exponent(Residue j, Residue l) const { return mod(j * l, k_); }
  std::complex<double> value(Residue j, Residue l) const { return unit_root(exponent(j, l), k_); }

  std::vector<std::vector<Residue>> exponents() const {
    std::vector<std::vector<Residue>> e(static_cast<std::size_t>(k_), std::vector<Residue>(static_cast<std::size_t>(k_)));
    for (Residue j = 0; j < k_; ++j)
      for (Residue l = 0; l < k_; ++l) e[static_cast<std::size_t>(j)][static_cast<std::size_t>(l)] = exponent(j, l);
    return e;
  }

  ComplexMatrix realize() const {
    const auto sz = static_cast<std::size_t>(k_);
    ComplexMatrix m(sz, sz);
    for (std::size_t j = 0; j < sz; ++j)
      for (std::size_t l = 0; l < sz; ++l) m(j, l) = value(static_cast<Residue>(j), static_cast<Residue>(l));
    return m;
  }

  /// A^2 as an exact integer matrix. Entry (j, l) is the character sum
  /// sum_m phi^{(j+l) m}; its exponent multiset is read off and must be either
  /// all zeros (value k) or uniform over a nontrivial subgroup of Z/k (value 0).
  std::vector<std::vector<std::int64_t>> square_exact() const {
    const auto sz = static_cast<std::size_t>(k_);
    std::vector<std::vector<std::int64_t>> sq(sz, std::vector<std::int64_t>(sz, 0));
    std::vector<std::int64_t> counts(sz);
    for (Residue j = 0; j < k_; ++j)
      for (Residue l = 0; l < k_; ++l) {
        std::fill(counts.begin(), counts.end(), 0);
        for (Residue m = 0; m < k_; ++m) ++counts[static_cast<std::size_t>(mod(exponent(j, m) + exponent(m, l), k_))];
        sq[static_cast<std::size_t>(j)][static_cast<std::size_t>(l)] = vanishing_or_trivial(counts);
      }
    return sq;
  }

 private:
  // Value of sum_e counts[e] phi^e when the support is {0} or a full subgroup
  // of order > 1 with equal weights; anything else is not expected here.
  std::int64_t vanishing_or_trivial(const std::vector<std::int64_t>& counts) const {
    if (counts[0] == k_) return k_;
    std::int64_t step = 0;
    for (std::size_t e = 1; e < counts.size(); ++e)
      if (counts[e] != 0) {
        step = static_cast<std::int64_t>(e);
        break;
      }
    if (step == 0 || k_ % step != 0) throw std::logic_error("character sum with unexpected exponent pattern");
    for (std::size_t e = 0; e < counts.size(); ++e) {
      const bool in_subgroup = static_cast<std::int64_t>(e) % step == 0;
      if (counts[e] != (in_subgroup ? counts[0] : 0)) throw std::logic_error("character sum with unexpected exponent pattern");
    }
    return 0;
  }

  std::int64_t k_;
};

inline PhaseMatrix phase_matrix(std::int64_t k) { return PhaseMatrix(k); }

struct TensorEntry {
  Residue exponent;
  std::complex<double> value;
};

/// Entry (X, Y) of phi^shift * A^{(x)n} in O(n): phi^{shift + <X,Y>}.
inline TensorEntry tensor_entry(std::int64_t k, int n, Residue shift, std::span<const Residue> x,
                                std::span<const Residue> y) {
  if (x.size() != static_cast<std::size_t>(n) || y.size() != static_cast<std::size_t>(n))
    throw DimensionError("tensor_entry: index vectors must have length n = " + std::to_string(n));
  const Residue e = mod(shift + dot(x, y, k), k);
  return {e, unit_root(e, k)};
}

/// Shift s for which Re(phi^s M) equals 1 on every pair with <X,Y> = t.
inline Residue witness_shift(std::int64_t k, Residue t) { return mod(-t, k); }

// ---------------------------------------------------------------------------
// Closed-form spectra

struct EigenvalueClass {
  double value;
  std::optional<std::uint64_t> multiplicity;
};

struct ClosedFormSpectrum {
  std::int64_t k = 0;
  int n = 0;
  Residue shift = 0;
  double scale = 0.0;           // k^{n/2}: every singular value of M, and the modulus of every eigenvalue
  std::vector<EigenvalueClass> realpart;  // eigenvalues of Re(phi^shift M), ascending, merged
  /// Multiplicities of the eigenvalues i^e k^{n/2} of M for e = 0..3.
  std::optional<std::array<std::uint64_t, 4>> quarter_multiplicities;

  double spectral_radius() const {
    double r = 0.0;
    for (const auto& c : realpart) r = std::max(r, std::abs(c.value));
    return r;
  }
  double lambda_max() const { return realpart.empty() ? 0.0 : realpart.back().value; }

  /// Distance from x to the nearest closed-form eigenvalue.
  double distance_to_value_set(double x) const {
    double best = INFINITY;
    for (const auto& c : realpart) best = std::min(best, std::abs(x - c.value));
    return best;
  }

  /// Sorted eigenvalue list expanded by multiplicity (requires multiplicities).
  std::vector<double> expanded() const {
    std::vector<double> out;
    for (const auto& c : realpart)
      if (c.multiplicity) out.insert(out.end(), *c.multiplicity, c.value);
    return out;
  }
};

/// Multiplicities of the eigenvalues sqrt(k) * i^e (e = 0..3) of the k x k
/// phase matrix with phi = e^{+2 pi i / k}.
inline std::array<std::uint64_t, 4> phase_matrix_quarter_multiplicities(std::int64_t k) {
  const auto m = static_cast<std::uint64_t>(k / 4);
  // Ordered as (1, i, -1, -i).
  switch (k % 4) {
    case 0: return {m + 1, m, m, m - 1};
    case 1: return {m + 1, m, m, m};
    case 2: return {m + 1, m, m + 1, m};
    default: return {m + 1, m + 1, m + 1, m};
  }
}

inline ClosedFormSpectrum closed_form_spectrum(std::int64_t k, int n, Residue shift) {
  if (k < 2) throw ParameterError("closed_form_spectrum: k must be >= 2");
  if (n < 1) throw ParameterError("closed_form_spectrum: n must be >= 1");
  ClosedFormSpectrum s;
  s.k = k;
  s.n = n;
  s.shift = mod(shift, k);
  s.scale = std::pow(static_cast<double>(k), 0.5 * n);

  // Eigenvalues of A^{(x)n} are products of eigenvalues of A, so the quarter
  // exponents add mod 4 and multiplicities convolve.
  if (space_size(k, n)) {
    const auto base = phase_matrix_quarter_multiplicities(k);
    std::array<std::uint64_t, 4> acc{1, 0, 0, 0};
    for (int r = 0; r < n; ++r) {
      std::array<std::uint64_t, 4> next{0, 0, 0, 0};
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) next[static_cast<std::size_t>((a + b) % 4)] += acc[static_cast<std::size_t>(a)] * base[static_cast<std::size_t>(b)];
      acc = next;
    }
    s.quarter_multiplicities = acc;
  }

  // Re(phi^s * i^e * k^{n/2}) = k^{n/2} cos(2 pi s / k + e pi / 2) = k^{n/2} Re(phi^{s + e k/4}).
  // Evaluate with exponent arithmetic over 4k so quarter turns stay exact.
  std::vector<EigenvalueClass> raw;
  for (int e = 0; e < 4; ++e) {
    const double c = unit_root_real(4 * s.shift + e * k, 4 * k);
    std::optional<std::uint64_t> mult;
    if (s.quarter_multiplicities) mult = (*s.quarter_multiplicities)[static_cast<std::size_t>(e)];
    if (mult && *mult == 0) continue;
    raw.push_back({c * s.scale, mult});
  }
  std::sort(raw.begin(), raw.end(), [](const auto& a, const auto& b) { return a.value < b.value; });
  for (const auto& c : raw) {
    if (!s.realpart.empty() && std::abs(s.realpart.back().value - c.value) <= 1e-12 * std::max(1.0, s.scale)) {
      auto& last = s.realpart.back();
      if (last.multiplicity && c.multiplicity) last.multiplicity = *last.multiplicity + *c.multiplicity;
    } else {
      s.realpart.push_back(c);
    }
  }
  return s;
}

// ---------------------------------------------------------------------------
// Dense realizations and numeric spectra

inline std::size_t checked_dense_size(std::int64_t k, int n, std::uint64_t cap) {
  auto size = space_size(k, n);
  if (!size || *size > cap)
    throw ResourceError("dense realization of k^n = " + std::to_string(k) + "^" + std::to_string(n) +
                        " rows exceeds cap " + std::to_string(cap));
  return static_cast<std::size_t>(*size);
}

/// N = Re(phi^shift A^{(x)n}) with rows indexed lexicographically.
inline RealMatrix realize_dense(std::int64_t k, int n, Residue shift, std::uint64_t cap = kDefaultDenseCap) {
  if (k < 2) throw ParameterError("realize_dense: k must be >= 2");
  const std::size_t size = checked_dense_size(k, n, cap);
  std::vector<ResidueVector> idx(size);
  for (std::size_t i = 0; i < size; ++i) idx[i] = decode(i, k, n);
  RealMatrix out(size, size);
  for (std::size_t i = 0; i < size; ++i)
    for (std::size_t j = i; j < size; ++j) out(i, j) = out(j, i) = unit_root_real(shift + dot(idx[i], idx[j], k), k);
  return out;
}

/// phi^shift A^{(x)n} as a dense complex matrix.
inline ComplexMatrix realize_dense_complex(std::int64_t k, int n, Residue shift, std::uint64_t cap = kDefaultDenseCap) {
  if (k < 2) throw ParameterError("realize_dense_complex: k must be >= 2");
  const std::size_t size = checked_dense_size(k, n, cap);
  std::vector<ResidueVector> idx(size);
  for (std::size_t i = 0; i < size; ++i) idx[i] = decode(i, k, n);
  ComplexMatrix out(size, size);
  for (std::size_t i = 0; i < size; ++i)
    for (std::size_t j = i; j < size; ++j) out(i, j) = out(j, i) = unit_root(shift + dot(idx[i], idx[j], k), k);
  return out;
}

struct NumericSpectrum {
  std::vector<double> values;  // ascending
  std::vector<double> residuals;
  double max_residual = 0.0;
  double tolerance = 1e-10;
  int sweeps = 0;
};

inline NumericSpectrum numeric_spectrum(const RealMatrix& matrix, double tol = 1e-10, int max_sweeps = 100) {
  auto eig = jacobi_eigen(matrix, {tol, max_sweeps});
  NumericSpectrum s;
  s.values = std::move(eig.values);
  s.residuals = std::move(eig.residuals);
  s.max_residual = eig.max_residual();
  s.tolerance = tol;
  s.sweeps = eig.sweeps;
  return s;
}

inline double trace(const RealMatrix& m) {
  double t = 0.0;
  for (std::size_t i = 0; i < std::min(m.rows(), m.cols()); ++i) t += m(i, i);
  return t;
}

/// Closed form and numeric spectra side by side.
struct SpectralSummary {
  ClosedFormSpectrum closed_form;
  std::optional<NumericSpectrum> numeric;
  double tolerance = 1e-8;
  double max_value_set_distance = 0.0;  // numeric eigenvalue vs nearest closed-form value
  double max_multiset_deviation = 0.0;  // sorted numeric vs sorted closed-form multiset
  double trace_matrix = 0.0;
  double trace_numeric = 0.0;
  double trace_closed_form = 0.0;

  bool consistent() const {
    if (!numeric) return true;
    return max_value_set_distance <= tolerance && max_multiset_deviation <= tolerance &&
           std::abs(trace_matrix - trace_numeric) <= tolerance && std::abs(trace_matrix - trace_closed_form) <= tolerance;
  }
};

/// Closed form for (k, n, shift), plus a numeric check when k^n fits the cap.
inline SpectralSummary spectral_summary(std::int64_t k, int n, Residue shift, double tolerance = 1e-8,
                                        std::uint64_t cap = kDefaultDenseCap, bool numeric = true) {
  SpectralSummary s;
  s.closed_form = closed_form_spectrum(k, n, shift);
  s.tolerance = tolerance;
  for (const auto& c : s.closed_form.realpart)
    if (c.multiplicity) s.trace_closed_form += c.value * static_cast<double>(*c.multiplicity);
  auto size = space_size(k, n);
  if (!numeric || !size || *size > cap) return s;

  const auto dense = realize_dense(k, n, shift, cap);
  s.numeric = numeric_spectrum(dense);
  s.trace_matrix = trace(dense);
  for (double v : s.numeric->values) {
    s.trace_numeric += v;
    s.max_value_set_distance = std::max(s.max_value_set_distance, s.closed_form.distance_to_value_set(v));
  }
  const auto expected = s.closed_form.expanded();
  if (expected.size() == s.numeric->values.size()) {
    for (std::size_t i = 0; i < expected.size(); ++i)
      s.max_multiset_deviation = std::max(s.max_multiset_deviation, std::abs(expected[i] - s.numeric->values[i]));
  } else {
    s.max_multiset_deviation = INFINITY;
  }
  return s;
}

inline nlohmann::json to_json(const SpectralSummary& s) {
  nlohmann::json classes = nlohmann::json::array();
  for (const auto& c : s.closed_form.realpart) {
    nlohmann::json e = {{"value", round_sig(c.value)}};
    if (c.multiplicity) e["multiplicity"] = *c.multiplicity;
    classes.push_back(e);
  }
  nlohmann::json j = {{"k", s.closed_form.k},
                      {"n", s.closed_form.n},
                      {"t", s.closed_form.shift},
                      {"closed_form",
                       {{"singular_value", round_sig(s.closed_form.scale)},
                        {"spectral_radius", round_sig(s.closed_form.spectral_radius())},
                        {"lambda_max", round_sig(s.closed_form.lambda_max())},
                        {"eigenvalues", classes}}}};
  if (s.numeric) {
    nlohmann::json vals = nlohmann::json::array();
    for (double v : s.numeric->values) vals.push_back(round_sig(v));
    j["numeric"] = vals;
    j["max_residual"] = round_sig(s.numeric->max_residual);
    j["max_deviation"] = round_sig(std::max(s.max_value_set_distance, s.max_multiset_deviation));
    j["trace"] = round_sig(s.trace_matrix);
    j["consistent"] = s.consistent();
  } else {
    j["numeric"] = nlohmann::json::array();
    j["max_residual"] = nullptr;
  }
  return j;
}

// ---------------------------------------------------------------------------
// Real block structure of the phase matrix

struct BlockTransformReport {
  std::int64_t k = 0;
  RealMatrix transform;          // columns are the new orthonormal basis
  ComplexMatrix conjugated;      // U^T A U
  std::size_t real_block = 0;    // leading block: real symmetric
  std::size_t imag_block = 0;    // trailing block: i times real symmetric
  double orthogonality_error = 0.0;
  double cross_block_max = 0.0;
  double real_block_imag_max = 0.0;  // imaginary parts inside the real block
  double imag_block_real_max = 0.0;  // real parts inside the imaginary block
  double asymmetry_max = 0.0;
  std::vector<double> real_block_eigenvalues;
  std::vector<double> imag_block_eigenvalues;  // of the real symmetric factor A_2

  bool block_diagonal(double tol) const {
    return orthogonality_error <= tol && cross_block_max <= tol && real_block_imag_max <= tol &&
           imag_block_real_max <= tol && asymmetry_max <= tol;
  }
};

/// Orthogonal change of basis {e_0, e_{k/2} (even k), (e_j +- e_{k-j})/sqrt 2}
/// splitting A into a real symmetric block and a purely imaginary symmetric
/// block (0-based indices).
inline BlockTransformReport real_block_transform(std::int64_t k) {
  const PhaseMatrix a(k);
  const auto sz = static_cast<std::size_t>(k);
  const double h = 1.0 / std::sqrt(2.0);

  std::vector<std::vector<std::pair<std::size_t, double>>> sym, anti;
  sym.push_back({{0, 1.0}});
  for (std::size_t j = 1; 2 * j < sz; ++j) sym.push_back({{j, h}, {sz - j, h}});
  if (sz % 2 == 0) sym.push_back({{sz / 2, 1.0}});
  for (std::size_t j = 1; 2 * j < sz; ++j) anti.push_back({{j, h}, {sz - j, -h}});

  BlockTransformReport r;
  r.k = k;
  r.real_block = sym.size();
  r.imag_block = anti.size();
  r.transform = RealMatrix(sz, sz);
  std::size_t col = 0;
  for (const auto* group : {&sym, &anti})
    for (const auto& basis_vec : *group) {
      for (auto [row, coef] : basis_vec) r.transform(row, col) = coef;
      ++col;
    }

  const auto gram = r.transform.transpose() * r.transform;
  r.orthogonality_error = max_abs_diff(gram, RealMatrix::identity(sz));

  ComplexMatrix u(sz, sz);
  for (std::size_t i = 0; i < sz; ++i)
    for (std::size_t j = 0; j < sz; ++j) u(i, j) = r.transform(i, j);
  r.conjugated = u.transpose() * a.realize() * u;

  RealMatrix a1(r.real_block, r.real_block), a2(r.imag_block, r.imag_block);
  for (std::size_t i = 0; i < sz; ++i)
    for (std::size_t j = 0; j < sz; ++j) {
      const auto z = r.conjugated(i, j);
      r.asymmetry_max = std::max(r.asymmetry_max, std::abs(z - r.conjugated(j, i)));
      const bool i_real = i < r.real_block, j_real = j < r.real_block;
      if (i_real != j_real) {
        r.cross_block_max = std::max(r.cross_block_max, std::abs(z));
      } else if (i_real) {
        r.real_block_imag_max = std::max(r.real_block_imag_max, std::abs(z.imag()));
        a1(i, j) = z.real();
      } else {
        r.imag_block_real_max = std::max(r.imag_block_real_max, std::abs(z.real()));
        a2(i - r.real_block, j - r.real_block) = z.imag();
      }
    }
  // Symmetrize away rounding before handing the blocks to the eigensolver.
  for (auto* blk : {&a1, &a2})
    for (std::size_t i = 0; i < blk->rows(); ++i)
      for (std::size_t j = i + 1; j < blk->cols(); ++j) (*blk)(i, j) = (*blk)(j, i) = 0.5 * ((*blk)(i, j) + (*blk)(j, i));
  if (r.real_block > 0) r.real_block_eigenvalues = jacobi_eigen(a1).values;
  if (r.imag_block > 0) r.imag_block_eigenvalues = jacobi_eigen(a2).values;
  return r;
}

// ---------------------------------------------------------------------------
// Orthogonality graph

/// Graph on (Z/kZ)^n with X ~ Y iff <X,Y> != t (mod k); X carries a loop iff
/// <X,X> != t. Adjacency is implicit; explicit() materializes it.
class OrthogonalityGraph {
 public:
  OrthogonalityGraph(std::int64_t k, int n, Residue t) : k_(k), n_(n), t_(t) {
    if (k < 2) throw ParameterError("orthogonality_graph: k must be >= 2");
    if (n < 1) throw ParameterError("orthogonality_graph: n must be >= 1");
    if (t < 0 || t >= k) throw ParameterError("orthogonality_graph: t must lie in [0, k-1]");
    auto size = space_size(k, n);
    if (!size) throw ResourceError("orthogonality_graph: k^n overflows");
    vertex_count_ = *size;
  }

  std::int64_t k() const { return k_; }
  int n() const { return n_; }
  Residue t() const { return t_; }
  std::uint64_t vertex_count() const { return vertex_count_; }

  ResidueVector vertex(std::uint64_t index) const { return decode(index, k_, n_); }
  std::uint64_t index_of(const ResidueVector& v) const { return encode(v, k_); }

  bool adjacent(const ResidueVector& x, const ResidueVector& y) const { return dot(x, y, k_) != t_; }
  bool adjacent(std::uint64_t x, std::uint64_t y) const { return adjacent(vertex(x), vertex(y)); }
  bool has_loop(std::uint64_t x) const { return adjacent(x, x); }

  Graph explicit_graph(std::uint64_t cap = kDefaultDenseCap) const {
    if (vertex_count_ > cap)
      throw ResourceError("orthogonality_graph: " + std::to_string(vertex_count_) + " vertices exceed cap " +
                          std::to_string(cap));
    const auto size = static_cast<std::size_t>(vertex_count_);
    std::vector<ResidueVector> vs(size);
    for (std::size_t i = 0; i < size; ++i) vs[i] = vertex(i);
    Graph g(size);
    for (std::size_t i = 0; i < size; ++i)
      for (std::size_t j = i; j < size; ++j)
        if (dot(vs[i], vs[j], k_) != t_) g.add_edge(i, j);
    return g;
  }

 private:
  std::int64_t k_;
  int n_;
  Residue t_;
  std::uint64_t vertex_count_ = 0;
};

inline OrthogonalityGraph orthogonality_graph(std::int64_t k, int n, Residue t) { return OrthogonalityGraph(k, n, t); }

/// Pairs (X, Y) with <X,Y> = t where phi^{shift + <X,Y>} != 1, checked on
/// exponents. Empty iff Re(phi^shift M) satisfies the independence-bound
/// hypothesis for the graph.
inline std::vector<std::pair<std::uint64_t, std::uint64_t>> hypothesis_violations(const OrthogonalityGraph& g,
                                                                                  Residue shift,
                                                                                  std::size_t limit = 16) {
  std::vector<std::pair<std::uint64_t, std::uint64_t>> bad;
  for (std::uint64_t x = 0; x < g.vertex_count(); ++x) {
    const auto vx = g.vertex(x);
    for (std::uint64_t y = x; y < g.vertex_count(); ++y) {
      const auto vy = g.vertex(y);
      if (g.adjacent(vx, vy)) continue;
      if (tensor_entry(g.k(), g.n(), shift, vx, vy).exponent != 0) {
        bad.emplace_back(x, y);
        if (bad.size() >= limit) return bad;
      }
    }
  }
  return bad;
}

}  // namespace etlab
