#include "subsig/binomial.hpp"

#include <vector>

namespace subsig {

namespace {

std::vector<std::vector<Integer>> build_pascal() {
  std::vector<std::vector<Integer>> rows(kMaxBinomialRow + 1);
  for (unsigned n = 0; n <= kMaxBinomialRow; ++n) {
    rows[n].resize(n + 1);
    rows[n][0] = 1;
    rows[n][n] = 1;
    for (unsigned k = 1; k < n; ++k) rows[n][k] = rows[n - 1][k - 1] + rows[n - 1][k];
  }
  return rows;
}

}  // namespace

const Integer& binom(unsigned n, unsigned k) {
  static const std::vector<std::vector<Integer>> table = build_pascal();
  static const Integer zero = 0;
  if (n > kMaxBinomialRow)
    throw CapabilityError("binomial row " + std::to_string(n) + " exceeds cache size " +
                          std::to_string(kMaxBinomialRow));
  if (k > n) return zero;
  return table[n][k];
}

}  // namespace subsig
