#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "etlab/errors.hpp"

namespace etlab {

using Residue = std::int64_t;

inline Residue mod(std::int64_t a, std::int64_t k) {
  Residue r = a % k;
  return r < 0 ? r + k : r;
}

inline bool is_prime(std::int64_t k) {
  if (k < 2) return false;
  if (k % 2 == 0) return k == 2;
  for (std::int64_t d = 3; d * d <= k; d += 2)
    if (k % d == 0) return false;
  return true;
}

inline Residue mod_pow(Residue base, std::uint64_t exp, std::int64_t k) {
  __int128 result = 1 % k;
  __int128 b = mod(base, k);
  while (exp > 0) {
    if (exp & 1U) result = result * b % k;
    b = b * b % k;
    exp >>= 1U;
  }
  return static_cast<Residue>(result);
}

/// Inverse of a modulo k, or nullopt when gcd(a, k) != 1.
inline std::optional<Residue> mod_inverse(Residue a, std::int64_t k) {
  std::int64_t old_r = mod(a, k), r = k;
  std::int64_t old_s = 1, s = 0;
  while (r != 0) {
    std::int64_t q = old_r / r;
    std::int64_t tmp = old_r - q * r;
    old_r = r;
    r = tmp;
    tmp = old_s - q * s;
    old_s = s;
    s = tmp;
  }
  if (old_r != 1) return std::nullopt;
  return mod(old_s, k);
}

inline std::vector<std::int64_t> prime_factors(std::int64_t k) {
  std::vector<std::int64_t> out;
  for (std::int64_t d = 2; d * d <= k; ++d) {
    if (k % d == 0) {
      out.push_back(d);
      while (k % d == 0) k /= d;
    }
  }
  if (k > 1) out.push_back(k);
  return out;
}

/// Smallest primitive root modulo a prime k (1 for k = 2).
inline Residue primitive_root(std::int64_t k) {
  if (!is_prime(k)) throw ParameterError("primitive_root: modulus " + std::to_string(k) + " is not prime");
  if (k == 2) return 1;
  const auto factors = prime_factors(k - 1);
  for (Residue g = 2; g < k; ++g) {
    bool generator = true;
    for (auto q : factors) {
      if (mod_pow(g, static_cast<std::uint64_t>((k - 1) / q), k) == 1) {
        generator = false;
        break;
      }
    }
    if (generator) return g;
  }
  throw ParameterError("primitive_root: none found");  // unreachable for primes
}

/// The unique x in [0, p*q) with x = a (mod p), x = b (mod q); p, q coprime.
inline Residue crt_pair(Residue a, std::int64_t p, Residue b, std::int64_t q) {
  auto p_inv = mod_inverse(p % q, q);
  if (!p_inv) throw ParameterError("crt_pair: moduli are not coprime");
  // x = a + p * ((b - a) * p^{-1} mod q)
  __int128 step = static_cast<__int128>(mod(b - a, q)) * *p_inv % q;
  return mod(static_cast<std::int64_t>(a + p * step), p * q);
}

/// k^e as an exact integer; throws on 64-bit overflow.
inline std::int64_t ipow(std::int64_t k, int e) {
  std::int64_t r = 1;
  for (int i = 0; i < e; ++i) {
    if (r > INT64_MAX / k) throw std::overflow_error("ipow overflow");
    r *= k;
  }
  return r;
}

/// Integer square root when k is a perfect square.
inline std::optional<std::int64_t> exact_sqrt(std::int64_t k) {
  if (k < 0) return std::nullopt;
  auto r = static_cast<std::int64_t>(std::sqrt(static_cast<long double>(k)));
  while (r * r > k) --r;
  while ((r + 1) * (r + 1) <= k) ++r;
  if (r * r == k) return r;
  return std::nullopt;
}

}  // namespace etlab
