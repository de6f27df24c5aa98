#pragma once

// Gaussian elimination over Z/pZ, p prime.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "etlab/errors.hpp"
#include "etlab/modring.hpp"
#include "etlab/numtheory.hpp"

namespace etlab::linalg {

/// Reduced row echelon form in place; returns pivot columns.
inline std::vector<std::size_t> rref(std::vector<ResidueVector>& rows, std::int64_t p) {
  std::vector<std::size_t> pivots;
  if (rows.empty()) return pivots;
  const std::size_t cols = rows.front().size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows.size(); ++c) {
    std::size_t sel = r;
    while (sel < rows.size() && mod(rows[sel][c], p) == 0) ++sel;
    if (sel == rows.size()) continue;
    std::swap(rows[r], rows[sel]);
    const auto inv = mod_inverse(rows[r][c], p);
    if (!inv) throw ParameterError("rref: modulus is not prime");
    for (auto& x : rows[r]) x = mod(x * *inv, p);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == r) continue;
      const Residue f = mod(rows[i][c], p);
      if (f == 0) continue;
      for (std::size_t j = 0; j < cols; ++j) rows[i][j] = mod(rows[i][j] - f * rows[r][j], p);
    }
    pivots.push_back(c);
    ++r;
  }
  rows.resize(r);
  return pivots;
}

inline std::size_t rank(std::vector<ResidueVector> rows, std::int64_t p) { return rref(rows, p).size(); }

/// Basis of {x : <row, x> = 0 for every row} in dimension n.
inline std::vector<ResidueVector> orthogonal_complement(std::vector<ResidueVector> rows, int n, std::int64_t p) {
  const auto dim = static_cast<std::size_t>(n);
  const auto pivots = rref(rows, p);
  std::vector<bool> is_pivot(dim, false);
  for (auto c : pivots) is_pivot[c] = true;
  std::vector<ResidueVector> basis;
  for (std::size_t free = 0; free < dim; ++free) {
    if (is_pivot[free]) continue;
    ResidueVector x(dim, 0);
    x[free] = 1;
    for (std::size_t i = 0; i < pivots.size(); ++i) x[pivots[i]] = mod(-rows[i][free], p);
    basis.push_back(std::move(x));
  }
  return basis;
}

inline bool in_span(const ResidueVector& v, const std::vector<ResidueVector>& basis, std::int64_t p) {
  auto with = basis;
  with.push_back(v);
  return rank(with, p) == rank(basis, p);
}

/// Vectors of `super` that extend a basis of span(sub) to a basis of span(super).
inline std::vector<ResidueVector> complement_basis(const std::vector<ResidueVector>& sub,
                                                   const std::vector<ResidueVector>& super, std::int64_t p) {
  std::vector<ResidueVector> acc = sub;
  std::vector<ResidueVector> out;
  std::size_t r = rank(acc, p);
  for (const auto& v : super) {
    acc.push_back(v);
    const std::size_t r2 = rank(acc, p);
    if (r2 > r) {
      out.push_back(v);
      r = r2;
    } else {
      acc.pop_back();
    }
  }
  return out;
}

/// sum_i coeffs[i] * basis[i] mod k.
inline ResidueVector combine(const std::vector<ResidueVector>& basis, std::span<const Residue> coeffs, std::int64_t k) {
  if (basis.empty()) return {};
  ResidueVector out(basis.front().size(), 0);
  for (std::size_t i = 0; i < basis.size(); ++i) {
    if (coeffs[i] == 0) continue;
    for (std::size_t j = 0; j < out.size(); ++j) out[j] = mod(out[j] + coeffs[i] * basis[i][j], k);
  }
  return out;
}

}  // namespace etlab::linalg
