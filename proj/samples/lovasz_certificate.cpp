// Bounds the largest 0-town in (Z/k)^n by the top eigenvalue of the witness
// matrix, then checks the bound against an exhaustive search.

#include <cstdio>

#include "etlab/etlab.hpp"

int main() {
  using namespace etlab;
  for (auto [k, n] : {std::pair<std::int64_t, int>{2, 4}, {3, 2}, {3, 3}, {5, 2}}) {
    auto report = lovasz_bound(k, n, 0);
    const auto summary = spectral_summary(k, n, witness_shift(k, 0));
    std::printf("k=%lld n=%d  lambda_max=%s  alpha=%s  certified=%s  spectrum consistent=%s\n",
                static_cast<long long>(k), n, format_double(*report.value).c_str(),
                report.extras["oracle_alpha"].dump().c_str(),
                report.certified_against && report.certified_against->pass ? "yes" : "no",
                summary.consistent() ? "yes" : "no");
  }
}
