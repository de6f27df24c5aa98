#pragma once

// Exact arithmetic over Z/kZ: residue vectors, families of vectors, the
// k-town predicate and bad-pair statistics.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "etlab/errors.hpp"
#include "etlab/numtheory.hpp"
#include "etlab/rational.hpp"

namespace etlab {

using ResidueVector = std::vector<Residue>;

/// Sum of u_i * v_i reduced into [0, k-1].
inline Residue dot(std::span<const Residue> u, std::span<const Residue> v, std::int64_t k) {
  if (u.size() != v.size())
    throw DimensionError("dot: length mismatch " + std::to_string(u.size()) + " vs " + std::to_string(v.size()));
  __int128 acc = 0;
  for (std::size_t i = 0; i < u.size(); ++i) acc += static_cast<__int128>(u[i]) * v[i];
  return mod(static_cast<std::int64_t>(acc % k), k);
}

/// Index of v in the lexicographic enumeration of (Z/kZ)^n (first coordinate
/// most significant).
inline std::uint64_t encode(std::span<const Residue> v, std::int64_t k) {
  std::uint64_t idx = 0;
  for (auto x : v) idx = idx * static_cast<std::uint64_t>(k) + static_cast<std::uint64_t>(x);
  return idx;
}

inline ResidueVector decode(std::uint64_t index, std::int64_t k, int n) {
  ResidueVector v(static_cast<std::size_t>(n));
  for (int i = n - 1; i >= 0; --i) {
    v[static_cast<std::size_t>(i)] = static_cast<Residue>(index % static_cast<std::uint64_t>(k));
    index /= static_cast<std::uint64_t>(k);
  }
  return v;
}

/// Number of points of (Z/kZ)^n, or nullopt if it does not fit in 63 bits.
inline std::optional<std::uint64_t> space_size(std::int64_t k, int n) {
  std::uint64_t total = 1;
  for (int i = 0; i < n; ++i) {
    if (total > static_cast<std::uint64_t>(INT64_MAX) / static_cast<std::uint64_t>(k)) return std::nullopt;
    total *= static_cast<std::uint64_t>(k);
  }
  return total;
}

/// A set of distinct vectors in (Z/kZ)^n. Immutable after construction.
class ModFamily {
 public:
  ModFamily(std::int64_t k, int n, std::vector<ResidueVector> vectors) : k_(k), n_(n), vectors_(std::move(vectors)) {
    if (k < 2) throw ParameterError("ModFamily: modulus must be >= 2, got " + std::to_string(k));
    if (n < 1) throw ParameterError("ModFamily: dimension must be >= 1, got " + std::to_string(n));
    for (const auto& v : vectors_) {
      if (v.size() != static_cast<std::size_t>(n))
        throw DimensionError("ModFamily: vector of length " + std::to_string(v.size()) + " in dimension " +
                             std::to_string(n));
      for (auto x : v)
        if (x < 0 || x >= k) throw ParameterError("ModFamily: coordinate " + std::to_string(x) + " not in [0, k-1]");
    }
    std::vector<const ResidueVector*> order;
    order.reserve(vectors_.size());
    for (const auto& v : vectors_) order.push_back(&v);
    std::sort(order.begin(), order.end(), [](auto* a, auto* b) { return *a < *b; });
    for (std::size_t i = 1; i < order.size(); ++i)
      if (*order[i] == *order[i - 1]) throw ParameterError("ModFamily: duplicate vector");
  }

  /// Reduces every coordinate mod k and drops duplicates instead of rejecting them.
  static ModFamily from_unreduced(std::int64_t k, int n, const std::vector<ResidueVector>& raw) {
    std::set<ResidueVector> seen;
    std::vector<ResidueVector> out;
    for (auto v : raw) {
      for (auto& x : v) x = mod(x, k);
      if (seen.insert(v).second) out.push_back(std::move(v));
    }
    return ModFamily(k, n, std::move(out));
  }

  std::int64_t k() const { return k_; }
  int n() const { return n_; }
  std::size_t size() const { return vectors_.size(); }
  bool empty() const { return vectors_.empty(); }
  const std::vector<ResidueVector>& vectors() const { return vectors_; }
  const ResidueVector& operator[](std::size_t i) const { return vectors_[i]; }
  auto begin() const { return vectors_.begin(); }
  auto end() const { return vectors_.end(); }

  bool contains(const ResidueVector& v) const { return std::find(vectors_.begin(), vectors_.end(), v) != vectors_.end(); }

  ModFamily sorted() const {
    auto copy = vectors_;
    std::sort(copy.begin(), copy.end());
    return ModFamily(k_, n_, std::move(copy));
  }

  friend bool operator==(const ModFamily& a, const ModFamily& b) {
    return a.k_ == b.k_ && a.n_ == b.n_ && a.sorted().vectors_ == b.sorted().vectors_;
  }

 private:
  std::int64_t k_;
  int n_;
  std::vector<ResidueVector> vectors_;
};

/// True iff every ordered pair (self-pairs included) has scalar product t.
inline bool is_town(const ModFamily& family, Residue t) {
  const auto& vs = family.vectors();
  for (std::size_t i = 0; i < vs.size(); ++i)
    for (std::size_t j = i; j < vs.size(); ++j)
      if (dot(vs[i], vs[j], family.k()) != t) return false;
  return true;
}

struct PairStats {
  std::int64_t ordered_bad = 0;            // ordered pairs incl. diagonal with product != t
  std::int64_t unordered_bad_offdiag = 0;  // unordered distinct pairs with product != t
  std::int64_t diagonal_bad = 0;
  Rational epsilon_ordered;                // ordered_bad / |F|^2 (0 for the empty family)
  std::optional<std::int64_t> op_value;    // op(F); only for k = 2, t = 0
};

inline PairStats pair_stats(const ModFamily& family, Residue t) {
  PairStats s;
  const auto& vs = family.vectors();
  for (std::size_t i = 0; i < vs.size(); ++i) {
    if (dot(vs[i], vs[i], family.k()) != t) ++s.diagonal_bad;
    for (std::size_t j = i + 1; j < vs.size(); ++j)
      if (dot(vs[i], vs[j], family.k()) != t) ++s.unordered_bad_offdiag;
  }
  s.ordered_bad = 2 * s.unordered_bad_offdiag + s.diagonal_bad;
  const auto size = static_cast<std::int64_t>(vs.size());
  if (size > 0) s.epsilon_ordered = Rational(s.ordered_bad, size * size);
  if (family.k() == 2 && t == 0) s.op_value = s.unordered_bad_offdiag;
  return s;
}

/// Characteristic 0/1 vectors of subsets of {1..n}.
inline ModFamily subsets_to_family(const std::vector<std::vector<int>>& sets, int n) {
  std::vector<ResidueVector> out;
  out.reserve(sets.size());
  for (const auto& s : sets) {
    ResidueVector chi(static_cast<std::size_t>(n), 0);
    for (int e : s) {
      if (e < 1 || e > n)
        throw ParameterError("subsets_to_family: element " + std::to_string(e) + " outside [1, " + std::to_string(n) + "]");
      chi[static_cast<std::size_t>(e - 1)] = 1;
    }
    out.push_back(std::move(chi));
  }
  return ModFamily(2, n, std::move(out));
}

// Family JSON: {"k": int, "n": int, "vectors": [[...], ...]}. Writer sorts.

inline nlohmann::json family_to_json(const ModFamily& family) {
  nlohmann::json vs = nlohmann::json::array();
  const auto sorted = family.sorted();
  for (const auto& v : sorted.vectors()) vs.push_back(v);
  return {{"k", family.k()}, {"n", family.n()}, {"vectors", std::move(vs)}};
}

inline ModFamily family_from_json(const nlohmann::json& j) {
  try {
    auto k = j.at("k").get<std::int64_t>();
    auto n = j.at("n").get<int>();
    auto vs = j.at("vectors").get<std::vector<ResidueVector>>();
    return ModFamily(k, n, std::move(vs));
  } catch (const nlohmann::json::exception& e) {
    throw ParameterError(std::string("family JSON: ") + e.what());
  }
}

}  // namespace etlab
