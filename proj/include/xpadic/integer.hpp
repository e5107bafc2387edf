#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <limits>

namespace xpadic {

/// Sentinel for an infinite valuation or precision.
inline constexpr std::int64_t kInfinity = std::numeric_limits<std::int64_t>::max();

/// p^n, cached per thread.
const mpz_class& prime_power(const mpz_class& p, std::int64_t n);

/// Reduces z into [0, p^n).
void reduce_mod_prime_power(mpz_class& z, const mpz_class& p, std::int64_t n);

/// p-adic valuation of a nonzero integer. Returns kInfinity for zero.
std::int64_t valuation(const mpz_class& z, const mpz_class& p);

/// Strips the p-part from z (z != 0) and returns its valuation.
std::int64_t remove_prime(mpz_class& z, const mpz_class& p);

/// p-adic valuation of a rational. kInfinity for zero.
std::int64_t valuation(const mpq_class& q, const mpz_class& p);

/// Probabilistic primality test.
bool is_probable_prime(const mpz_class& p);

/// Saturating helpers for valuations and precisions that may be kInfinity.
inline std::int64_t sat_add(std::int64_t a, std::int64_t b) {
  if (a == kInfinity || b == kInfinity) return kInfinity;
  return a + b;
}

}  // namespace xpadic
