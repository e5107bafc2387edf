#include "xpadic/approx_poly.hpp"

#include <algorithm>
#include <sstream>

#include "xpadic/errors.hpp"

namespace xpadic {

namespace {

ApproxElement coeff_or_zero(const ApproxPoly& f, std::size_t i) {
  return i < f.coeffs().size() ? f.coeff(i) : ApproxElement::precise_zero(f.ring());
}

}  // namespace

ApproxPoly::ApproxPoly(ApproxRing ring, std::vector<ApproxElement> coeffs)
    : ring_(std::move(ring)), coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) throw DomainError("polynomial needs at least one coefficient");
  for (auto& c : coeffs_) {
    if (!c.ring().same_family(ring_)) throw DomainError("coefficient from a different ring");
    if (!(c.ring() == ring_)) c = c.coerce_to(ring_);
  }
}

long ApproxPoly::apparent_degree() const {
  for (long i = static_cast<long>(coeffs_.size()) - 1; i >= 0; --i) {
    if (!coeffs_[i].is_weakly_zero()) return i;
  }
  return -1;
}

std::int64_t ApproxPoly::absolute_precision() const {
  std::int64_t m = kInfinity;
  for (const auto& c : coeffs_) m = std::min(m, c.absolute_precision());
  return m;
}

ApproxPoly operator+(const ApproxPoly& f, const ApproxPoly& g) {
  const std::size_t n = std::max(f.coeffs().size(), g.coeffs().size());
  std::vector<ApproxElement> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(coeff_or_zero(f, i) + coeff_or_zero(g, i));
  return ApproxPoly(f.ring(), std::move(out));
}

ApproxPoly ApproxPoly::operator-() const {
  std::vector<ApproxElement> out;
  for (const auto& c : coeffs_) out.push_back(-c);
  return ApproxPoly(ring_, std::move(out));
}

ApproxPoly operator-(const ApproxPoly& f, const ApproxPoly& g) { return f + (-g); }

ApproxPoly operator*(const ApproxPoly& f, const ApproxPoly& g) {
  const std::size_t n = f.coeffs().size() + g.coeffs().size() - 1;
  std::vector<ApproxElement> out(n, ApproxElement::precise_zero(f.ring()));
  for (std::size_t i = 0; i < f.coeffs().size(); ++i) {
    if (f.coeff(i).is_precise_zero()) continue;
    for (std::size_t j = 0; j < g.coeffs().size(); ++j) {
      if (g.coeff(j).is_precise_zero()) continue;
      out[i + j] = out[i + j] + f.coeff(i) * g.coeff(j);
    }
  }
  return ApproxPoly(f.ring(), std::move(out));
}

ApproxPoly ApproxPoly::scaled_by(const ApproxElement& c) const {
  std::vector<ApproxElement> out;
  for (const auto& x : coeffs_) out.push_back(x * c);
  return ApproxPoly(ring_, std::move(out));
}

ApproxPoly ApproxPoly::derivative() const {
  if (coeffs_.size() == 1) return ApproxPoly(ring_, {ApproxElement::precise_zero(ring_)});
  std::vector<ApproxElement> out;
  for (std::size_t i = 1; i < coeffs_.size(); ++i) {
    out.push_back(coeffs_[i] * ApproxElement::from_integer(ring_, static_cast<long>(i)));
  }
  return ApproxPoly(ring_, std::move(out));
}

ApproxPoly ApproxPoly::shift(const ApproxElement& a) const {
  // Taylor shift by repeated synthetic division.
  std::vector<ApproxElement> c = coeffs_;
  const std::size_t n = c.size();
  for (std::size_t i = 0; i + 1 < n; ++i) {
    for (std::size_t j = n - 1; j > i; --j) c[j - 1] = c[j - 1] + a * c[j];
  }
  return ApproxPoly(ring_, std::move(c));
}

ApproxPoly ApproxPoly::scale(std::int64_t j, std::int64_t k) const {
  std::vector<ApproxElement> out;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    out.push_back(coeffs_[i].shifted(j + k * static_cast<std::int64_t>(i)));
  }
  return ApproxPoly(ring_, std::move(out));
}

ApproxElement ApproxPoly::evaluate(const ApproxElement& a) const {
  ApproxElement acc = coeffs_.back();
  for (std::size_t i = coeffs_.size() - 1; i-- > 0;) acc = acc * a + coeffs_[i];
  return acc;
}

std::pair<ApproxPoly, ApproxPoly> ApproxPoly::divrem_monic(const ApproxPoly& g) const {
  const std::size_t dg = g.degree();
  if (!weakly_equal(g.coeff(dg), ApproxElement::from_integer(ring_, 1))) {
    throw DomainError("divisor is not monic");
  }
  std::vector<ApproxElement> r = coeffs_;
  if (r.size() <= dg) {
    return {ApproxPoly(ring_, {ApproxElement::precise_zero(ring_)}), *this};
  }
  std::vector<ApproxElement> q(r.size() - dg, ApproxElement::precise_zero(ring_));
  for (std::size_t i = r.size(); i-- > dg;) {
    const ApproxElement t = r[i];
    q[i - dg] = t;
    r[i] = ApproxElement::precise_zero(ring_);
    if (t.is_precise_zero()) continue;
    for (std::size_t j = 0; j < dg; ++j) r[i - dg + j] = r[i - dg + j] - t * g.coeff(j);
  }
  r.resize(std::max<std::size_t>(dg, 1), ApproxElement::precise_zero(ring_));
  return {ApproxPoly(ring_, std::move(q)), ApproxPoly(ring_, std::move(r))};
}

ApproxPoly ApproxPoly::coerce_to(const ApproxRing& target) const {
  std::vector<ApproxElement> out;
  for (const auto& c : coeffs_) out.push_back(c.coerce_to(target));
  return ApproxPoly(target, std::move(out));
}

ApproxPoly ApproxPoly::truncated_degree(std::size_t n) const {
  std::vector<ApproxElement> out(coeffs_.begin(), coeffs_.begin() + std::min(n, coeffs_.size()));
  return ApproxPoly(ring_, std::move(out));
}

std::string ApproxPoly::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = coeffs_.size(); i-- > 0;) {
    if (coeffs_[i].is_precise_zero()) continue;
    os << (first ? "" : " + ") << "(" << coeffs_[i].to_string() << ")";
    if (i == 1) os << "*x";
    if (i > 1) os << "*x^" << i;
    first = false;
  }
  return first ? "0" : os.str();
}

bool weakly_equal(const ApproxPoly& f, const ApproxPoly& g) {
  const std::size_t n = std::max(f.coeffs().size(), g.coeffs().size());
  for (std::size_t i = 0; i < n; ++i) {
    if (!weakly_equal(coeff_or_zero(f, i), coeff_or_zero(g, i))) return false;
  }
  return true;
}

}  // namespace xpadic
