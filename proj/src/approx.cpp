#include "xpadic/approx.hpp"

#include <algorithm>
#include <atomic>
#include <sstream>

#include "xpadic/detail/ring_data.hpp"
#include "xpadic/errors.hpp"

namespace xpadic {

using detail::RingData;

namespace {

std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return (a + b - 1) / b; }

void require_same_family(const ApproxRing& a, const ApproxRing& b) {
  if (a.family() != b.family()) {
    throw DomainError("elements belong to different ring families");
  }
}

// Fills in theta/kappa for an extension whose other fields are set.
void finish_extension(RingData& r) {
  const RingData& base = *r.base;
  r.e_total = base.e_total * (r.mode == ExtensionMode::eisenstein ? r.degree : 1);
  r.f_total = base.f_total * (r.mode == ExtensionMode::unramified ? r.degree : 1);
  mpz_pow_ui(r.residue_size.get_mpz_t(), r.p.get_mpz_t(), static_cast<unsigned long>(r.f_total));
  if (r.mode == ExtensionMode::unramified) {
    r.theta = detail::one(r);
    r.theta_precision = kInfinity;
    return;
  }
  // t^e = -(g_0 + g_1 t + ...) = pi_base * eps with eps = -(g_0 + g_1 t + ...)/pi_base,
  // so pi_base = t^e * eps^-1 and pi_base / t = t^(e-1) * eps^-1.
  const std::int64_t e = r.degree;
  const std::int64_t w = r.g_precision;
  const std::int64_t eps_prec = e * (w - 1);
  Integral eps = detail::zero(r);
  for (std::int64_t i = 0; i < e; ++i) {
    Integral gamma = detail::div_pi(base, r.g[i], 1, w);
    eps.c[i] = detail::neg(base, gamma, w - 1);
  }
  r.theta = eps_prec > 0 ? detail::inverse(r, eps, eps_prec) : detail::zero(r);
  r.theta_precision = eps_prec;
  r.kappa = detail::mul_pi(r, r.theta, e - 1, e * w - 1);
}

std::shared_ptr<const RingData> make_extension(const ApproxRing& base, std::vector<Integral> g,
                                               std::int64_t w, ExtensionMode mode,
                                               std::uint64_t family, std::int64_t cap,
                                               ApproxRing::Rebuild rebuild) {
  auto r = std::make_shared<RingData>();
  r->p = base.prime_number();
  r->field = base.is_field();
  r->family = family;
  r->level = base.level() + 1;
  r->base = base.data_ptr();
  r->mode = mode;
  r->degree = static_cast<std::int64_t>(g.size());
  r->g = std::move(g);
  r->g_precision = w;
  r->cap = cap;
  r->rebuild = std::move(rebuild);
  finish_extension(*r);
  return r;
}

}  // namespace

// ---------------------------------------------------------------- ApproxRing

std::uint64_t ApproxRing::fresh_family() {
  static std::atomic<std::uint64_t> next{1};
  return next.fetch_add(1);
}

ApproxRing ApproxRing::prime(const mpz_class& p, std::int64_t precision, bool field,
                             std::optional<std::uint64_t> family) {
  if (!is_probable_prime(p)) throw DomainError("not a prime: " + p.get_str());
  if (precision < 1) throw DomainError("precision must be at least 1");
  auto r = std::make_shared<RingData>();
  r->p = p;
  r->cap = precision;
  r->field = field;
  r->family = family ? *family : fresh_family();
  r->residue_size = p;
  r->theta.z = 1;
  return ApproxRing(std::move(r));
}

ApproxRing ApproxRing::extend(const ApproxRing& base, std::span<const ApproxElement> g,
                              ExtensionMode mode, std::optional<std::uint64_t> family,
                              Rebuild rebuild) {
  if (g.size() < 3) throw DomainError("defining polynomial must have degree at least 2");
  const std::size_t d = g.size() - 1;
  for (const auto& c : g) require_same_family(c.ring(), base);
  const ApproxElement one = ApproxElement::from_rational(base, 1);
  if (!weakly_equal(g[d], one) || g[d].is_weakly_zero()) {
    throw DomainError("defining polynomial is not monic");
  }
  std::int64_t w = base.precision();
  for (std::size_t i = 0; i < d; ++i) {
    if (g[i].is_precise_zero()) continue;
    if (g[i].weak_valuation() < 0) throw DomainError("defining polynomial is not integral");
    w = std::min(w, g[i].absolute_precision());
  }
  if (w < 1) throw DomainError("defining polynomial carries no precision");

  const RingData& bd = base.data();
  std::vector<Integral> coeffs;
  coeffs.reserve(d);
  for (std::size_t i = 0; i < d; ++i) {
    const ApproxElement& c = g[i];
    if (c.is_precise_zero() || c.weak_valuation() >= w) {
      coeffs.push_back(detail::zero(bd));
    } else {
      coeffs.push_back(detail::mul_pi(bd, c.unit(), c.weak_valuation(), w));
    }
  }

  if (mode == ExtensionMode::eisenstein) {
    if (!g[0].valuation_known() || g[0].is_precise_zero() || g[0].weak_valuation() != 1) {
      throw DomainError("not Eisenstein: constant term must have valuation exactly 1");
    }
    for (std::size_t i = 1; i < d; ++i) {
      if (!g[i].is_precise_zero() && g[i].weak_valuation() < 1) {
        throw DomainError("not Eisenstein: middle coefficient is a unit");
      }
    }
  } else {
    detail::ResiduePoly residue;
    for (std::size_t i = 0; i < d; ++i) residue.push_back(detail::truncate(bd, coeffs[i], 1));
    residue.push_back(detail::one(bd));
    if (!detail::residue_irreducible(bd, residue)) {
      throw DomainError("not inertial: defining polynomial is reducible modulo the uniformizer");
    }
  }
  const std::int64_t step_e = mode == ExtensionMode::eisenstein ? static_cast<std::int64_t>(d) : 1;
  return ApproxRing(make_extension(base, std::move(coeffs), w, mode,
                                   family ? *family : fresh_family(), step_e * w,
                                   std::move(rebuild)));
}

ApproxRing ApproxRing::change_precision(std::int64_t precision) const {
  if (precision < 1) throw DomainError("precision must be at least 1");
  const RingData& r = *d_;
  if (r.level == 0) return prime(r.p, precision, r.field, r.family);
  const std::int64_t step_e = r.mode == ExtensionMode::eisenstein ? r.degree : 1;
  const std::int64_t w = ceil_div(precision, step_e);
  if (w > r.g_precision) {
    if (!r.rebuild) {
      throw PrecisionError("defining polynomial not available at precision " +
                           std::to_string(precision));
    }
    ApproxRing out = r.rebuild(precision);
    if (out.family() != r.family) throw DomainError("rebuild produced a ring of another family");
    return out;
  }
  const ApproxRing new_base = ApproxRing(r.base).change_precision(w);
  std::vector<Integral> g;
  for (const auto& c : r.g) g.push_back(detail::truncate(*r.base, c, w));
  return ApproxRing(make_extension(new_base, std::move(g), w, r.mode, r.family, precision, r.rebuild));
}

const mpz_class& ApproxRing::prime_number() const { return d_->p; }
std::int64_t ApproxRing::precision() const { return d_->cap; }
std::uint64_t ApproxRing::family() const { return d_->family; }
bool ApproxRing::is_field() const { return d_->field; }
int ApproxRing::level() const { return d_->level; }
std::optional<ExtensionMode> ApproxRing::mode() const {
  if (d_->level == 0) return std::nullopt;
  return d_->mode;
}
std::int64_t ApproxRing::step_degree() const { return d_->degree; }
std::int64_t ApproxRing::ramification_index() const { return d_->e_total; }
std::int64_t ApproxRing::residue_degree() const { return d_->f_total; }
std::int64_t ApproxRing::defining_precision() const {
  return d_->level == 0 ? kInfinity : d_->g_precision;
}
std::optional<ApproxRing> ApproxRing::base() const {
  if (!d_->base) return std::nullopt;
  return ApproxRing(d_->base);
}

std::vector<ApproxElement> ApproxRing::defining_polynomial() const {
  std::vector<ApproxElement> out;
  if (d_->level == 0) return out;
  const ApproxRing b(d_->base);
  for (const auto& c : d_->g) out.push_back(ApproxElement::from_parts(b, 0, d_->g_precision, c));
  out.push_back(ApproxElement::from_rational(b, 1));
  return out;
}

bool operator==(const ApproxRing& a, const ApproxRing& b) {
  return a.d_ == b.d_ || (a.family() == b.family() && a.precision() == b.precision());
}

std::string ApproxRing::describe() const {
  std::ostringstream os;
  const RingData& r = *d_;
  if (r.level == 0) {
    os << (r.field ? "Q_" : "Z_") << r.p;
  } else {
    os << ApproxRing(r.base).describe() << "["
       << (r.mode == ExtensionMode::eisenstein ? "eisenstein " : "unramified ")
       << detail::generator_name(r) << ", deg " << r.degree << "]";
  }
  os << " @ " << r.cap;
  return os.str();
}

// ------------------------------------------------------------- ApproxElement

ApproxElement ApproxElement::normalized(const ApproxRing& ring, std::int64_t v, std::int64_t n,
                                        Integral value) {
  const RingData& r = ring.data();
  n = std::min(n, r.cap);
  const std::int64_t w = n > 0 ? detail::valuation(r, value, n) : 0;
  if (w >= n) return ApproxElement(ring, v + n, 0, detail::zero(r));
  return ApproxElement(ring, v + w, n - w, detail::div_pi(r, value, w, n));
}

ApproxElement ApproxElement::precise_zero(const ApproxRing& ring) {
  return ApproxElement(ring, kInfinity, 0, detail::zero(ring.data()));
}

ApproxElement ApproxElement::weak_zero(const ApproxRing& ring, std::int64_t absolute_precision) {
  if (absolute_precision == kInfinity) return precise_zero(ring);
  return ApproxElement(ring, absolute_precision, 0, detail::zero(ring.data()));
}

ApproxElement ApproxElement::from_integer(const ApproxRing& ring, const mpz_class& n) {
  return from_rational(ring, mpq_class(n));
}

ApproxElement ApproxElement::from_rational(const ApproxRing& ring, const mpq_class& q) {
  if (sgn(q) == 0) return precise_zero(ring);
  const RingData& r = ring.data();
  if (r.level > 0) {
    return from_base(ring, from_rational(ApproxRing(r.base), q));
  }
  mpz_class num = q.get_num();
  mpz_class den = q.get_den();
  const std::int64_t v = remove_prime(num, r.p) - remove_prime(den, r.p);
  if (v < 0 && !r.field) throw DomainError("rational has negative valuation in an integer ring");
  Integral u;
  const mpz_class& modulus = prime_power(r.p, r.cap);
  mpz_invert(u.z.get_mpz_t(), den.get_mpz_t(), modulus.get_mpz_t());
  u.z *= num;
  reduce_mod_prime_power(u.z, r.p, r.cap);
  return ApproxElement(ring, v, r.cap, std::move(u));
}

ApproxElement ApproxElement::from_base(const ApproxRing& ring, const ApproxElement& x) {
  const RingData& r = ring.data();
  if (r.level == 0) throw DomainError("the prime ring has no base");
  require_same_family(x.ring(), ApproxRing(r.base));
  if (x.is_precise_zero()) return precise_zero(ring);
  const std::int64_t step_e = r.mode == ExtensionMode::eisenstein ? r.degree : 1;
  const std::int64_t v = step_e * x.weak_valuation();
  std::int64_t n = std::min(r.cap, x.relative_precision() * step_e);
  Integral value = detail::embed_base(r, x.unit(), x.relative_precision(), n);
  if (x.weak_valuation() != 0 && r.theta_precision != kInfinity) {
    n = std::min(n, r.theta_precision);
    Integral theta = x.weak_valuation() > 0 ? r.theta : detail::inverse(r, r.theta, n);
    const mpz_class exponent = mpz_class(std::to_string(std::abs(x.weak_valuation())));
    value = detail::mul(r, value, detail::pow(r, theta, exponent, n), n);
  }
  return normalized(ring, v, n, std::move(value));
}

ApproxElement ApproxElement::uniformizer(const ApproxRing& ring) {
  return ApproxElement(ring, 1, ring.precision(), detail::one(ring.data()));
}

ApproxElement ApproxElement::generator(const ApproxRing& ring) {
  const RingData& r = ring.data();
  if (r.level == 0 || r.mode == ExtensionMode::eisenstein) return uniformizer(ring);
  return normalized(ring, 0, r.cap, detail::basis(r, 1));
}

ApproxElement ApproxElement::from_parts(const ApproxRing& ring, std::int64_t v, std::int64_t k,
                                        Integral unit) {
  if (v == kInfinity) return precise_zero(ring);
  return normalized(ring, v, k, std::move(unit));
}

ApproxElement ApproxElement::operator-() const {
  if (is_precise_zero() || k_ == 0) return *this;
  return ApproxElement(ring_, v_, k_, detail::neg(ring_.data(), unit_, k_));
}

ApproxElement operator+(const ApproxElement& x, const ApproxElement& y_in) {
  require_same_family(x.ring(), y_in.ring());
  const ApproxElement y = x.ring() == y_in.ring() ? y_in : y_in.coerce_to(x.ring());
  if (x.is_precise_zero()) return y;
  if (y.is_precise_zero()) return x;
  const ApproxElement& a = x.v_ <= y.v_ ? x : y;
  const ApproxElement& b = x.v_ <= y.v_ ? y : x;
  const std::int64_t abs_prec = std::min(a.absolute_precision(), b.absolute_precision());
  const std::int64_t rel = abs_prec - a.v_;
  if (rel <= 0) return ApproxElement::weak_zero(x.ring(), abs_prec);
  const RingData& r = x.ring().data();
  Integral value = detail::truncate(r, a.unit_, rel);
  const std::int64_t gap = b.v_ - a.v_;
  if (gap < rel && b.k_ > 0) {
    value = detail::add(r, value, detail::mul_pi(r, b.unit_, gap, rel), rel);
  }
  return ApproxElement::normalized(x.ring(), a.v_, rel, std::move(value));
}

ApproxElement operator-(const ApproxElement& x, const ApproxElement& y) { return x + (-y); }

ApproxElement operator*(const ApproxElement& x, const ApproxElement& y_in) {
  require_same_family(x.ring(), y_in.ring());
  const ApproxElement y = x.ring() == y_in.ring() ? y_in : y_in.coerce_to(x.ring());
  if (x.is_precise_zero() || y.is_precise_zero()) return ApproxElement::precise_zero(x.ring());
  const std::int64_t v = x.v_ + y.v_;
  const std::int64_t k = std::min(x.k_, y.k_);
  if (k == 0) return ApproxElement::weak_zero(x.ring(), v);
  return ApproxElement(x.ring(), v, k, detail::mul(x.ring().data(), x.unit_, y.unit_, k));
}

ApproxElement operator/(const ApproxElement& x, const ApproxElement& y_in) {
  require_same_family(x.ring(), y_in.ring());
  const ApproxElement y = x.ring() == y_in.ring() ? y_in : y_in.coerce_to(x.ring());
  if (y.is_weakly_zero()) throw PrecisionError("division by a weakly zero element");
  const std::int64_t v = x.is_precise_zero() ? kInfinity : x.v_ - y.v_;
  if (v < 0 && !x.ring().is_field()) {
    throw DomainError("quotient has negative valuation in an integer ring");
  }
  if (x.is_precise_zero()) return x;
  const std::int64_t k = std::min(x.k_, y.k_);
  if (k == 0) return ApproxElement::weak_zero(x.ring(), v);
  const RingData& r = x.ring().data();
  return ApproxElement(x.ring(), v, k, detail::mul(r, x.unit_, detail::inverse(r, y.unit_, k), k));
}

ApproxElement ApproxElement::pow(std::int64_t n) const {
  if (n == 0) return from_rational(ring_, 1);
  if (n < 0) {
    if (is_weakly_zero()) throw PrecisionError("negative power of a weakly zero element");
    return (from_rational(ring_, 1) / *this).pow(-n);
  }
  if (is_precise_zero()) return *this;
  if (k_ == 0) return weak_zero(ring_, v_ * n);
  const mpz_class exponent(std::to_string(n));
  return ApproxElement(ring_, v_ * n, k_, detail::pow(ring_.data(), unit_, exponent, k_));
}

ApproxElement ApproxElement::shifted(std::int64_t s) const {
  if (is_precise_zero()) return *this;
  return ApproxElement(ring_, v_ + s, k_, unit_);
}

ApproxElement ApproxElement::truncated(std::int64_t absolute_precision) const {
  if (this->absolute_precision() <= absolute_precision) return *this;
  if (absolute_precision <= v_) return weak_zero(ring_, absolute_precision);
  const std::int64_t k = absolute_precision - v_;
  return ApproxElement(ring_, v_, k, detail::truncate(ring_.data(), unit_, k));
}

ApproxElement ApproxElement::coerce_to(const ApproxRing& target) const {
  require_same_family(ring_, target);
  if (is_precise_zero()) return precise_zero(target);
  const std::int64_t k = std::min(k_, target.precision());
  return ApproxElement(target, v_, k, detail::truncate(target.data(), unit_, k));
}

Integral ApproxElement::residue() const {
  const RingData& r = ring_.data();
  if (v_ < 0) throw DomainError("residue of a non-integral element");
  if (v_ > 0) return detail::zero(r);
  if (k_ == 0) throw PrecisionError("residue of an element known to no digits");
  return detail::truncate(r, unit_, 1);
}

std::string ApproxElement::to_string() const {
  if (is_precise_zero()) return "0";
  const RingData& r = ring_.data();
  const std::string name = detail::uniformizer_name(r);
  auto power = [&](std::int64_t e) {
    if (e == 1) return name;
    return name + "^" + std::to_string(e);
  };
  std::ostringstream os;
  bool first = true;
  Integral u = unit_;
  std::int64_t prec = k_;
  for (std::int64_t i = 0; i < k_; ++i) {
    const Integral digit = detail::truncate(r, u, 1);
    if (!detail::is_zero(r, digit, 1)) {
      const std::string d = detail::residue_string(r, digit);
      const std::int64_t e = v_ + i;
      std::string term;
      if (e == 0) {
        term = d;
      } else if (d == "1") {
        term = power(e);
      } else if (d.find(' ') != std::string::npos) {
        term = "(" + d + ")*" + power(e);
      } else {
        term = d + "*" + power(e);
      }
      os << (first ? "" : " + ") << term;
      first = false;
    }
    if (i + 1 < k_) {
      u = detail::div_pi(r, detail::sub(r, u, digit, prec), 1, prec);
      --prec;
    }
  }
  os << (first ? "" : " + ") << "O(" << name << "^" << absolute_precision() << ")";
  return os.str();
}

bool weakly_equal(const ApproxElement& x, const ApproxElement& y) {
  require_same_family(x.ring(), y.ring());
  if (x.ring().precision() >= y.ring().precision()) {
    return (x - y.coerce_to(x.ring())).is_weakly_zero();
  }
  return (x.coerce_to(y.ring()) - y).is_weakly_zero();
}

Inspection inspect(const ApproxElement& x) {
  return Inspection{x.weak_valuation(), x.absolute_precision(), x.relative_precision(),
                    x.is_weakly_zero(), x.is_precise_zero(), x.valuation_known()};
}

}  // namespace xpadic
