#include "xpadic/integer.hpp"

#include <map>
#include <utility>

namespace xpadic {

const mpz_class& prime_power(const mpz_class& p, std::int64_t n) {
  thread_local std::map<std::pair<unsigned long, std::int64_t>, mpz_class> cache;
  thread_local mpz_class scratch;
  if (!p.fits_ulong_p()) {
    mpz_pow_ui(scratch.get_mpz_t(), p.get_mpz_t(), static_cast<unsigned long>(n));
    return scratch;
  }
  auto key = std::make_pair(p.get_ui(), n);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  mpz_class value;
  mpz_ui_pow_ui(value.get_mpz_t(), p.get_ui(), static_cast<unsigned long>(n));
  return cache.emplace(key, std::move(value)).first->second;
}

void reduce_mod_prime_power(mpz_class& z, const mpz_class& p, std::int64_t n) {
  if (n <= 0) {
    z = 0;
    return;
  }
  if (p == 2) {
    mpz_fdiv_r_2exp(z.get_mpz_t(), z.get_mpz_t(), static_cast<mp_bitcnt_t>(n));
    return;
  }
  if (sgn(z) >= 0) {
    // p^n >= 2^(n * (bits(p) - 1)); skip the division when z is visibly smaller.
    const std::size_t pbits = mpz_sizeinbase(p.get_mpz_t(), 2) - 1;
    const std::size_t zbits = mpz_sizeinbase(z.get_mpz_t(), 2);
    if (sgn(z) == 0 || static_cast<std::int64_t>(zbits) <= n * static_cast<std::int64_t>(pbits)) {
      return;
    }
  }
  mpz_fdiv_r(z.get_mpz_t(), z.get_mpz_t(), prime_power(p, n).get_mpz_t());
}

std::int64_t valuation(const mpz_class& z, const mpz_class& p) {
  if (sgn(z) == 0) return kInfinity;
  if (p == 2) return static_cast<std::int64_t>(mpz_scan1(z.get_mpz_t(), 0));
  mpz_class tmp = z;
  return static_cast<std::int64_t>(mpz_remove(tmp.get_mpz_t(), tmp.get_mpz_t(), p.get_mpz_t()));
}

std::int64_t remove_prime(mpz_class& z, const mpz_class& p) {
  return static_cast<std::int64_t>(mpz_remove(z.get_mpz_t(), z.get_mpz_t(), p.get_mpz_t()));
}

std::int64_t valuation(const mpq_class& q, const mpz_class& p) {
  if (sgn(q) == 0) return kInfinity;
  return valuation(q.get_num(), p) - valuation(q.get_den(), p);
}

bool is_probable_prime(const mpz_class& p) {
  return p >= 2 && mpz_probab_prime_p(p.get_mpz_t(), 30) > 0;
}

}  // namespace xpadic
