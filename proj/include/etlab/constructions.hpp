#pragma once

// Builders for extremal 0-town families: the eventown pairing subspace, the
// explicit k = 1 (mod 4) vectors, the isotropic chain for a general prime, the
// perfect-square family and the componentwise CRT lift.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <stdexcept>
#include <set>
#include <string>
#include <vector>

#include "etlab/errors.hpp"
#include "etlab/linalg_mod.hpp"
#include "etlab/modring.hpp"
#include "etlab/numtheory.hpp"

namespace etlab {

inline constexpr std::uint64_t kSpanCap = 1'000'000;

/// All Z/k-linear combinations of `generators`, duplicates removed, in
/// coefficient-lexicographic order.
inline ModFamily span_family(std::int64_t k, int n, const std::vector<ResidueVector>& generators,
                             std::uint64_t cap = kSpanCap) {
  const int dim = static_cast<int>(generators.size());
  auto combos = space_size(k, dim);
  if (!combos || *combos > cap)
    throw ResourceError("span_family: " + std::to_string(k) + "^" + std::to_string(dim) + " combinations exceed cap");
  std::set<ResidueVector> seen;
  std::vector<ResidueVector> out;
  for (std::uint64_t i = 0; i < *combos; ++i) {
    const auto coeffs = decode(i, k, dim == 0 ? 1 : dim);
    ResidueVector v = dim == 0 ? ResidueVector(static_cast<std::size_t>(n), 0) : linalg::combine(generators, coeffs, k);
    if (seen.insert(v).second) out.push_back(std::move(v));
    if (dim == 0) break;
  }
  return ModFamily(k, n, std::move(out));
}

/// True iff F contains 0 and is closed under addition mod k.
inline bool is_additively_closed(const ModFamily& f) {
  std::set<ResidueVector> members(f.begin(), f.end());
  if (!members.count(ResidueVector(static_cast<std::size_t>(f.n()), 0))) return false;
  for (const auto& a : f)
    for (const auto& b : f) {
      ResidueVector s(a.size());
      for (std::size_t i = 0; i < a.size(); ++i) s[i] = mod(a[i] + b[i], f.k());
      if (!members.count(s)) return false;
    }
  return true;
}

/// Span over Z/2 of e_{2i-1} + e_{2i}, i = 1..floor(n/2).
inline ModFamily eventown_pairing(int n) {
  if (n < 1) throw ParameterError("eventown_pairing: n must be >= 1");
  std::vector<ResidueVector> gens;
  for (int i = 0; 2 * i + 1 < n; ++i) {
    ResidueVector v(static_cast<std::size_t>(n), 0);
    v[static_cast<std::size_t>(2 * i)] = v[static_cast<std::size_t>(2 * i + 1)] = 1;
    gens.push_back(std::move(v));
  }
  return span_family(2, n, gens);
}

/// Span of v_j = e_{2j-1} + g^{(k-1)/4} e_{2j}, g the smallest primitive root;
/// g^{(k-1)/2} = -1 makes every v_j isotropic.
inline ModFamily prime_4t1(std::int64_t k, int n) {
  if (!is_prime(k) || k % 4 != 1) throw ParameterError("prime_4t1: k must be a prime = 1 (mod 4)");
  if (n < 2 || n % 2 != 0) throw ParameterError("prime_4t1: n must be even and positive");
  const Residue root = primitive_root(k);
  const Residue i_unit = mod_pow(root, static_cast<std::uint64_t>((k - 1) / 4), k);
  std::vector<ResidueVector> gens;
  for (int j = 0; j < n / 2; ++j) {
    ResidueVector v(static_cast<std::size_t>(n), 0);
    v[static_cast<std::size_t>(2 * j)] = 1;
    v[static_cast<std::size_t>(2 * j + 1)] = i_unit;
    gens.push_back(std::move(v));
  }
  return span_family(k, n, gens);
}

namespace detail {

using GramMatrix = std::vector<std::vector<Residue>>;

inline GramMatrix gram(const std::vector<ResidueVector>& basis, std::int64_t k) {
  GramMatrix g(basis.size(), std::vector<Residue>(basis.size()));
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (std::size_t j = 0; j < basis.size(); ++j) g[i][j] = dot(basis[i], basis[j], k);
  return g;
}

inline Residue bilinear(const GramMatrix& g, const ResidueVector& x, const ResidueVector& y, std::int64_t k) {
  __int128 acc = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] == 0) continue;
    for (std::size_t j = 0; j < y.size(); ++j) acc += static_cast<__int128>(x[i]) * g[i][j] % k * y[j];
  }
  return mod(static_cast<std::int64_t>(acc % k), k);
}

inline bool is_zero(const ResidueVector& x) {
  return std::all_of(x.begin(), x.end(), [](Residue r) { return r == 0; });
}

/// Lexicographically smallest nonzero isotropic coefficient vector supported
/// on the first `vars` coordinates of a `dim`-dimensional space.
inline std::optional<ResidueVector> smallest_isotropic(const GramMatrix& g, std::size_t dim, int vars, std::int64_t k) {
  const auto count = *space_size(k, vars);
  for (std::uint64_t i = 1; i < count; ++i) {
    auto head = decode(i, k, vars);
    ResidueVector x(dim, 0);
    std::copy(head.begin(), head.end(), x.begin());
    if (bilinear(g, x, x, k) == 0) return x;
  }
  return std::nullopt;
}

/// First pair (a, b), lexicographic in a then b, of linearly independent,
/// mutually orthogonal isotropic coefficient vectors.
inline std::optional<std::pair<ResidueVector, ResidueVector>> isotropic_pair(const GramMatrix& g, std::size_t dim,
                                                                             std::int64_t k) {
  const auto count = *space_size(k, static_cast<int>(dim));
  std::vector<ResidueVector> isotropic;
  for (std::uint64_t i = 1; i < count; ++i) {
    auto x = decode(i, k, static_cast<int>(dim));
    if (bilinear(g, x, x, k) == 0) isotropic.push_back(std::move(x));
  }
  for (const auto& a : isotropic)
    for (const auto& b : isotropic) {
      if (bilinear(g, a, b, k) != 0) continue;
      if (linalg::rank({a, b}, k) == 2) return std::make_pair(a, b);
    }
  return std::nullopt;
}

}  // namespace detail

/// n/2 pairwise orthogonal, linearly independent isotropic vectors over a
/// prime field, chosen one at a time in the orthogonal complement of the
/// previous ones, and their span.
///
/// Each step works in a complement C of span(V) inside V^perp: the form on C
/// is the quotient form on V^perp / V. While more than two vectors remain the
/// lexicographically smallest isotropic vector on the first three
/// coordinates of C is taken (a quadratic form in three variables over a
/// finite field always has a nontrivial zero). The last two vectors come from
/// an exhaustive search of the remaining 4-dimensional C, and n = 2 from an
/// exhaustive search of the plane. A nonzero seed re-randomizes the basis of C
/// before each step (deterministically in the seed).
inline ModFamily isotropic_chain(std::int64_t k, int n, std::uint64_t seed = 0) {
  if (!is_prime(k)) throw ParameterError("isotropic_chain: k must be prime");
  if (n < 2 || n % 2 != 0) throw ParameterError("isotropic_chain: n must be even and positive");
  std::mt19937_64 rng(seed);
  const std::size_t target = static_cast<std::size_t>(n / 2);
  std::vector<ResidueVector> chosen;

  std::vector<ResidueVector> standard;
  for (int i = 0; i < n; ++i) {
    ResidueVector e(static_cast<std::size_t>(n), 0);
    e[static_cast<std::size_t>(i)] = 1;
    standard.push_back(std::move(e));
  }

  while (chosen.size() < target) {
    const auto perp = chosen.empty() ? standard : linalg::orthogonal_complement(chosen, n, k);
    auto comp = linalg::complement_basis(chosen, perp, k);
    if (seed != 0) {
      // Random invertible recombination of the complement basis.
      std::uniform_int_distribution<Residue> dist(0, k - 1);
      std::vector<ResidueVector> mixed;
      while (mixed.size() < comp.size()) {
        ResidueVector coeffs(comp.size());
        for (auto& c : coeffs) c = dist(rng);
        auto cand = linalg::combine(comp, coeffs, k);
        auto trial = mixed;
        trial.push_back(cand);
        if (linalg::rank(trial, k) == trial.size()) mixed.push_back(std::move(cand));
      }
      comp = std::move(mixed);
    }
    const auto g = detail::gram(comp, k);
    const std::size_t remaining = target - chosen.size();
    if (remaining >= 3) {
      auto x = detail::smallest_isotropic(g, comp.size(), 3, k);
      if (!x) throw std::logic_error("isotropic_chain: ternary form without isotropic vector");
      chosen.push_back(linalg::combine(comp, *x, k));
    } else if (remaining == 2) {
      auto pair = detail::isotropic_pair(g, comp.size(), k);
      if (!pair)
        throw ConstructionInfeasible("isotropic_chain: no two orthogonal isotropic vectors remain for k = " +
                                     std::to_string(k) + ", n = " + std::to_string(n) +
                                     " (the form has Witt index below n/2)");
      chosen.push_back(linalg::combine(comp, pair->first, k));
      chosen.push_back(linalg::combine(comp, pair->second, k));
    } else {
      auto x = detail::smallest_isotropic(g, comp.size(), static_cast<int>(comp.size()), k);
      if (!x)
        throw ConstructionInfeasible("isotropic_chain: no isotropic vector for k = " + std::to_string(k) +
                                     ", n = " + std::to_string(n));
      chosen.push_back(linalg::combine(comp, *x, k));
    }
  }
  return span_family(k, n, chosen);
}

/// All vectors whose coordinates are multiples of m, over Z/m^2.
inline ModFamily perfect_square(std::int64_t m, int n) {
  if (m < 2) throw ParameterError("perfect_square: m must be >= 2");
  if (n < 1) throw ParameterError("perfect_square: n must be >= 1");
  const std::int64_t k = m * m;
  auto count = space_size(m, n);
  if (!count || *count > kSpanCap) throw ResourceError("perfect_square: m^n exceeds cap");
  std::vector<ResidueVector> out;
  out.reserve(static_cast<std::size_t>(*count));
  for (std::uint64_t i = 0; i < *count; ++i) {
    auto v = decode(i, m, n);
    for (auto& x : v) x *= m;
    out.push_back(std::move(v));
  }
  return ModFamily(k, n, std::move(out));
}

/// Componentwise CRT lift of two 0-towns over coprime moduli p and q.
inline ModFamily crt_compose(const ModFamily& fp, const ModFamily& fq) {
  const auto p = fp.k(), q = fq.k();
  if (std::gcd(p, q) != 1)
    throw ParameterError("crt_compose: moduli " + std::to_string(p) + " and " + std::to_string(q) + " are not coprime");
  if (fp.n() != fq.n()) throw DimensionError("crt_compose: dimension mismatch");
  if (!is_town(fp, 0) || !is_town(fq, 0)) throw ParameterError("crt_compose: components must be 0-towns");
  if (fp.size() * fq.size() > kSpanCap) throw ResourceError("crt_compose: result exceeds cap");
  std::vector<ResidueVector> out;
  out.reserve(fp.size() * fq.size());
  for (const auto& f : fp)
    for (const auto& g : fq) {
      ResidueVector w(f.size());
      for (std::size_t i = 0; i < w.size(); ++i) w[i] = crt_pair(f[i], p, g[i], q);
      out.push_back(std::move(w));
    }
  return ModFamily(p * q, fp.n(), std::move(out));
}

enum class ConstructionKind { EventownPairing, Prime4t1, IsotropicChain, PerfectSquare, Crt, Auto };

struct ConstructionSpec {
  ConstructionKind kind = ConstructionKind::Auto;
  std::int64_t k = 0;  // modulus (m^2 for perfect_square; p*q for crt)
  int n = 0;
  std::int64_t m = 0;  // perfect_square root
  std::int64_t p = 0;  // crt components
  std::int64_t q = 0;
  std::uint64_t seed = 0;
};

inline ConstructionKind parse_construction_kind(const std::string& s) {
  if (s == "eventown_pairing") return ConstructionKind::EventownPairing;
  if (s == "prime_4t1") return ConstructionKind::Prime4t1;
  if (s == "isotropic_chain") return ConstructionKind::IsotropicChain;
  if (s == "perfect_square") return ConstructionKind::PerfectSquare;
  if (s == "crt") return ConstructionKind::Crt;
  if (s == "auto") return ConstructionKind::Auto;
  throw ParameterError("unknown construction kind: " + s);
}

/// Largest known 0-town for (k, n): pairing for k = 2, the square family for
/// k = m^2, the explicit or chain family for odd primes, CRT over a coprime split.
inline ModFamily extremal_family(std::int64_t k, int n, std::uint64_t seed = 0) {
  if (k < 2) throw ParameterError("extremal_family: k must be >= 2");
  if (k == 2) return eventown_pairing(n);
  if (auto m = exact_sqrt(k)) return perfect_square(*m, n);
  if (is_prime(k)) {
    if (n % 2 == 0 && k % 4 == 1) return prime_4t1(k, n);
    if (n % 2 == 0) return isotropic_chain(k, n, seed);
    throw ParameterError("extremal_family: odd n over a prime modulus is not covered");
  }
  for (auto p : prime_factors(k)) {
    std::int64_t pp = 1;
    while (k % (pp * p) == 0) pp *= p;
    if (pp != k) return crt_compose(extremal_family(pp, n, seed), extremal_family(k / pp, n, seed));
  }
  throw ParameterError("extremal_family: no construction for k = " + std::to_string(k));
}

inline ModFamily build(const ConstructionSpec& spec) {
  switch (spec.kind) {
    case ConstructionKind::EventownPairing: return eventown_pairing(spec.n);
    case ConstructionKind::Prime4t1: return prime_4t1(spec.k, spec.n);
    case ConstructionKind::IsotropicChain: return isotropic_chain(spec.k, spec.n, spec.seed);
    case ConstructionKind::PerfectSquare: {
      std::int64_t m = spec.m;
      if (m == 0) {
        auto r = exact_sqrt(spec.k);
        if (!r) throw ParameterError("perfect_square: k is not a perfect square");
        m = *r;
      }
      return perfect_square(m, spec.n);
    }
    case ConstructionKind::Crt:
      return crt_compose(extremal_family(spec.p, spec.n, spec.seed), extremal_family(spec.q, spec.n, spec.seed));
    case ConstructionKind::Auto: return extremal_family(spec.k, spec.n, spec.seed);
  }
  throw ParameterError("build: unknown construction kind");
}

}  // namespace etlab
