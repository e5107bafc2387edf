#pragma once

// Cost of recomputing from scratch at precisions b, b^2, ... relative to a
// single computation at the final precision, for a cost model C(k) ~ k^alpha:
//   r(alpha, b)  = b^(alpha+1) / (b^alpha - 1)
//   b*(alpha)    = (1 + alpha)^(1/alpha)          (minimizes r)
//   r*(alpha)    = (1 + alpha)^(1 + 1/alpha) / alpha

#include <gmpxx.h>

#include <optional>

namespace xpadic {

struct OverheadModel {
  mpq_class alpha;
  mpq_class b;
  // exact values when rational, otherwise only the floating-point ones
  std::optional<mpq_class> r;
  std::optional<mpq_class> b_star;
  std::optional<mpq_class> r_star;
  long double r_approx;
  long double b_star_approx;
  long double r_star_approx;
};

/// Requires alpha > 0 and b > 1 (DomainError otherwise).
OverheadModel overhead(const mpq_class& alpha, const mpq_class& b);

/// Exact test of r(alpha, b) <= c * r*(alpha) for a positive integer alpha,
/// by raising both sides to the power alpha.
bool overhead_within(long alpha, const mpq_class& b, const mpq_class& c);

}  // namespace xpadic
