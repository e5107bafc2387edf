#include "xpadic/overhead.hpp"

#include <cmath>

#include "xpadic/errors.hpp"

namespace xpadic {

namespace {

mpq_class pow_q(const mpq_class& x, unsigned long e) {
  mpz_class num, den;
  mpz_pow_ui(num.get_mpz_t(), x.get_num_mpz_t(), e);
  mpz_pow_ui(den.get_mpz_t(), x.get_den_mpz_t(), e);
  mpq_class out(num, den);
  out.canonicalize();
  return out;
}

// Exact e-th root of a positive rational, if it is rational.
std::optional<mpq_class> root_q(const mpq_class& x, unsigned long e) {
  mpz_class num, den;
  if (mpz_root(num.get_mpz_t(), x.get_num_mpz_t(), e) == 0) return std::nullopt;
  if (mpz_root(den.get_mpz_t(), x.get_den_mpz_t(), e) == 0) return std::nullopt;
  mpq_class out(num, den);
  out.canonicalize();
  return out;
}

bool is_small_integer(const mpq_class& q) { return q.get_den() == 1 && q.get_num().fits_ulong_p(); }

}  // namespace

OverheadModel overhead(const mpq_class& alpha, const mpq_class& b) {
  if (alpha <= 0) throw DomainError("overhead needs alpha > 0");
  if (b <= 1) throw DomainError("overhead needs b > 1");
  OverheadModel m{alpha, b, {}, {}, {}, 0, 0, 0};
  const long double a = alpha.get_d(), bd = b.get_d();
  m.r_approx = std::pow(bd, a + 1) / (std::pow(bd, a) - 1);
  m.b_star_approx = std::pow(1 + a, 1 / a);
  m.r_star_approx = std::pow(1 + a, 1 + 1 / a) / a;
  if (is_small_integer(alpha)) {
    const unsigned long e = alpha.get_num().get_ui();
    m.r = pow_q(b, e + 1) / (pow_q(b, e) - 1);
    m.b_star = root_q(1 + alpha, e);
    if (m.b_star) m.r_star = (1 + alpha) * *m.b_star / alpha;
  }
  return m;
}

bool overhead_within(long alpha, const mpq_class& b, const mpq_class& c) {
  if (alpha <= 0) throw DomainError("overhead_within needs a positive integer alpha");
  if (b <= 1 || c <= 0) throw DomainError("overhead_within needs b > 1 and c > 0");
  const auto e = static_cast<unsigned long>(alpha);
  const mpq_class r = pow_q(b, e + 1) / (pow_q(b, e) - 1);
  // r <= c (1+a)^(1+1/a) / a  <=>  (a r / c)^a <= (1+a)^(a+1)
  const mpq_class lhs = pow_q(mpq_class(alpha) * r / c, e);
  const mpq_class rhs = pow_q(mpq_class(alpha + 1), e + 1);
  return lhs <= rhs;
}

}  // namespace xpadic
