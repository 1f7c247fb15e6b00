#pragma once

#include "subsig/rational.hpp"

namespace subsig {

/// Largest row of the Pascal-triangle cache. Everything in this library
/// works on systems of at most 24 components, so 48 rows leave ample
/// headroom for the beta-integral denominators.
inline constexpr unsigned kMaxBinomialRow = 48;

/// C(n, k) from a precomputed Pascal triangle; 0 when k > n.
/// Throws CapabilityError for n > kMaxBinomialRow.
const Integer& binom(unsigned n, unsigned k);

}  // namespace subsig
