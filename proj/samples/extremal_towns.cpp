// Builds extremal 0-towns for a few moduli and prints their sizes next to k^(n/2).

#include <cstdio>
#include <iostream>

#include "etlab/etlab.hpp"

int main() {
  using namespace etlab;
  for (auto [k, n] : {std::pair<std::int64_t, int>{2, 6}, {5, 2}, {7, 4}, {9, 2}, {10, 2}, {36, 1}}) {
    const auto f = extremal_family(k, n);
    std::printf("k=%-3lld n=%d  size=%-4zu  k^(n/2)=%-4lld  town=%s\n", static_cast<long long>(k), n, f.size(),
                static_cast<long long>(exact_half_power(k, n).value_or(-1)), is_town(f, 0) ? "yes" : "no");
  }
  std::cout << family_to_json(prime_4t1(5, 2)).dump() << "\n";
}
