#include "xpadic/rings.hpp"

#include <algorithm>

#include "xpadic/errors.hpp"

namespace xpadic {

using lazy::Args;
using lazy::Dep;
using lazy::KindEntry;
using lazy::NodePtr;
using lazy::Slot;
using lazy::Type;
using lazy::Value;

namespace detail {

struct StructureInfo {
  NodePtr node;
  mpz_class p;
  bool field = true;
  int level = 0;
  std::uint64_t family = 0;
  std::int64_t e = 1;
  std::int64_t f = 1;
  std::optional<ExtensionMode> mode;
  std::shared_ptr<StructureInfo> base;
  std::optional<ExactPoly> defining;
  NodePtr poly_ring;
};

}  // namespace detail

namespace {

const ApproxRing& ring_arg(const Args& a, std::size_t i) { return a.get<ApproxRing>(i); }
const ApproxElement& elt_arg(const Args& a, std::size_t i) { return a.get<ApproxElement>(i); }
const ApproxPoly& poly_arg(const Args& a, std::size_t i) { return a.get<ApproxPoly>(i); }

using PolySource = std::shared_ptr<const lazy::UserFunction>;

ApproxRing ring_at_epoch(const ApproxPoly& g, ExtensionMode mode, std::uint64_t family,
                         const PolySource& source);

struct Kinds {
  int prime, extension, poly_ring;
  int rational, from_base, uniformizer, generator, zero;
  int add, sub, mul, div, neg, pow, coefficient, evaluate;
  int p_coeffs, p_add, p_sub, p_mul, p_times, p_derivative, p_shift, p_scale, p_quotient;

  Kinds() {
    auto& t = lazy::KindTable::global();
    prime = t.add(KindEntry{Type::ring, "prime", {Slot::constant, Slot::constant, Slot::constant},
                            std::nullopt,
                            [](int n, const Args& a) -> Value {
                              return ApproxRing::prime(a.get<mpz_class>(0), lazy::epoch_precision(n),
                                                       a.get<std::int64_t>(2) != 0,
                                                       static_cast<std::uint64_t>(a.get<std::int64_t>(1)));
                            },
                            {}});
    extension = t.add(KindEntry{
        Type::ring, "extension",
        {Slot::ring, Slot::poly, Slot::constant, Slot::constant, Slot::constant}, std::nullopt,
        [](int, const Args& a) -> Value {
          return ring_at_epoch(poly_arg(a, 1), static_cast<ExtensionMode>(a.get<std::int64_t>(2)),
                               static_cast<std::uint64_t>(a.get<std::int64_t>(3)),
                               a.get<PolySource>(4));
        },
        [](const Value& at_min, int, const Args& a) -> Value {
          const ApproxRing& m = std::get<ApproxRing>(at_min);
          const ApproxPoly& g = poly_arg(a, 1);
          std::int64_t w = ring_arg(a, 0).precision();
          for (std::size_t i = 0; i + 1 < g.coeffs().size(); ++i) {
            if (!g.coeff(i).is_precise_zero()) w = std::min(w, g.coeff(i).absolute_precision());
          }
          const std::int64_t step_e = m.mode() == ExtensionMode::eisenstein ? m.step_degree() : 1;
          return m.change_precision(std::max<std::int64_t>(1, step_e * w));
        }});
    poly_ring = t.add(KindEntry{Type::poly_ring, "polynomials", {Slot::ring}, std::nullopt,
                                [](int, const Args& a) -> Value {
                                  return lazy::PolyRingApprox{ring_arg(a, 0)};
                                },
                                {}});

    rational = t.add(KindEntry{Type::element, "rational", {Slot::ring, Slot::constant}, std::nullopt,
                               [](int n, const Args& a) -> Value {
                                 // absolute precision 2^n in base digits, as every epoch-n input
                                 const ApproxRing& r = ring_arg(a, 0);
                                 return ApproxElement::from_rational(r, a.get<mpq_class>(1))
                                     .truncated(r.ramification_index() * lazy::epoch_precision(n));
                               },
                               {}});
    from_base = t.add(KindEntry{Type::element, "from-base", {Slot::ring, Slot::element}, std::nullopt,
                                [](int, const Args& a) -> Value {
                                  return ApproxElement::from_base(ring_arg(a, 0), elt_arg(a, 1));
                                },
                                {}});
    uniformizer = t.add(KindEntry{Type::element, "uniformizer", {Slot::ring}, std::nullopt,
                                  [](int, const Args& a) -> Value {
                                    return ApproxElement::uniformizer(ring_arg(a, 0));
                                  },
                                  {}});
    generator = t.add(KindEntry{Type::element, "generator", {Slot::ring}, std::nullopt,
                                [](int, const Args& a) -> Value {
                                  return ApproxElement::generator(ring_arg(a, 0));
                                },
                                {}});
    zero = t.add(KindEntry{Type::element, "zero", {Slot::ring}, std::nullopt,
                           [](int, const Args& a) -> Value {
                             return ApproxElement::precise_zero(ring_arg(a, 0));
                           },
                           {}});
    add = binary("add", [](const ApproxElement& x, const ApproxElement& y) { return x + y; });
    sub = binary("sub", [](const ApproxElement& x, const ApproxElement& y) { return x - y; });
    mul = binary("mul", [](const ApproxElement& x, const ApproxElement& y) { return x * y; });
    div = binary("div", [](const ApproxElement& x, const ApproxElement& y) { return x / y; });
    neg = t.add(KindEntry{Type::element, "neg", {Slot::element}, std::nullopt,
                          [](int, const Args& a) -> Value { return -elt_arg(a, 0); }, {}});
    pow = t.add(KindEntry{Type::element, "pow", {Slot::element, Slot::constant}, std::nullopt,
                          [](int, const Args& a) -> Value {
                            return elt_arg(a, 0).pow(a.get<std::int64_t>(1));
                          },
                          {}});
    coefficient = t.add(KindEntry{Type::element, "coefficient", {Slot::poly, Slot::constant},
                                  std::nullopt,
                                  [](int, const Args& a) -> Value {
                                    const ApproxPoly& f = poly_arg(a, 0);
                                    const auto i = static_cast<std::size_t>(a.get<std::int64_t>(1));
                                    return i < f.coeffs().size() ? f.coeff(i)
                                                                 : ApproxElement::precise_zero(f.ring());
                                  },
                                  {}});
    evaluate = t.add(KindEntry{Type::element, "evaluate", {Slot::poly, Slot::element}, std::nullopt,
                               [](int, const Args& a) -> Value {
                                 return poly_arg(a, 0).evaluate(elt_arg(a, 1));
                               },
                               {}});

    p_coeffs = t.add(KindEntry{Type::poly, "coefficients", {Slot::poly_ring}, Slot::element,
                               [](int, const Args& a) -> Value {
                                 std::vector<ApproxElement> c;
                                 c.reserve(a.size() - 1);
                                 for (std::size_t i = 1; i < a.size(); ++i) c.push_back(elt_arg(a, i));
                                 return ApproxPoly(a.get<lazy::PolyRingApprox>(0).base, std::move(c));
                               },
                               {}});
    p_add = poly_binary("add", [](const ApproxPoly& f, const ApproxPoly& g) { return f + g; });
    p_sub = poly_binary("sub", [](const ApproxPoly& f, const ApproxPoly& g) { return f - g; });
    p_mul = poly_binary("mul", [](const ApproxPoly& f, const ApproxPoly& g) { return f * g; });
    p_quotient = poly_binary("exact-quotient", [](const ApproxPoly& f, const ApproxPoly& g) {
      return f.divrem_monic(g).first;
    });
    p_times = t.add(KindEntry{Type::poly, "times", {Slot::poly, Slot::element}, std::nullopt,
                              [](int, const Args& a) -> Value {
                                return poly_arg(a, 0).scaled_by(elt_arg(a, 1));
                              },
                              {}});
    p_derivative = t.add(KindEntry{Type::poly, "derivative", {Slot::poly}, std::nullopt,
                                   [](int, const Args& a) -> Value { return poly_arg(a, 0).derivative(); },
                                   {}});
    p_shift = t.add(KindEntry{Type::poly, "shift", {Slot::poly, Slot::element}, std::nullopt,
                              [](int, const Args& a) -> Value {
                                return poly_arg(a, 0).shift(elt_arg(a, 1));
                              },
                              {}});
    p_scale = t.add(KindEntry{Type::poly, "scale", {Slot::poly, Slot::constant, Slot::constant},
                              std::nullopt,
                              [](int, const Args& a) -> Value {
                                return poly_arg(a, 0).scale(a.get<std::int64_t>(1), a.get<std::int64_t>(2));
                              },
                              {}});
  }

  template <class F>
  static int binary(const char* name, F op) {
    return lazy::KindTable::global().add(
        KindEntry{Type::element, name, {Slot::element, Slot::element}, std::nullopt,
                  [op](int, const Args& a) -> Value { return op(elt_arg(a, 0), elt_arg(a, 1)); }, {}});
  }

  template <class F>
  static int poly_binary(const char* name, F op) {
    return lazy::KindTable::global().add(
        KindEntry{Type::poly, name, {Slot::poly, Slot::poly}, std::nullopt,
                  [op](int, const Args& a) -> Value { return op(poly_arg(a, 0), poly_arg(a, 1)); }, {}});
  }
};

const Kinds& kinds() {
  static const Kinds k;
  return k;
}

// A failed extension test is final once the relevant coefficients carry
// enough digits; otherwise a later epoch may still pass.
bool extension_test_final(const ApproxPoly& g, ExtensionMode mode) {
  const std::size_t d = g.degree();
  const ApproxElement& lead = g.coeff(d);
  if (lead.absolute_precision() < 1) return false;
  if (!weakly_equal(lead, ApproxElement::from_integer(g.ring(), 1))) return true;
  if (mode == ExtensionMode::unramified) {
    for (std::size_t i = 0; i < d; ++i) {
      if (g.coeff(i).absolute_precision() < 1) return false;
    }
    return true;
  }
  const ApproxElement& c0 = g.coeff(0);
  if (c0.valuation_known() && c0.weak_valuation() != 1) return true;
  if (!c0.valuation_known() && c0.absolute_precision() >= 2) return true;
  for (std::size_t i = 1; i < d; ++i) {
    const ApproxElement& c = g.coeff(i);
    if (c.valuation_known() && c.weak_valuation() < 1) return true;
  }
  return false;
}

// Raising the precision of an extension re-reads the defining polynomial at
// later epochs through `source`, which maps an epoch to its approximation.
ApproxRing::Rebuild make_rebuild(PolySource source, ExtensionMode mode, std::uint64_t family) {
  return [source, mode, family](std::int64_t precision) -> ApproxRing {
    for (int n = 1; n <= lazy::config().max_epoch; ++n) {
      const Value v = source->fn(n, Args({}));
      const ApproxRing r = ring_at_epoch(std::get<ApproxPoly>(v), mode, family, source);
      if (r.precision() >= precision) return r.change_precision(precision);
    }
    throw BudgetExhausted("no epoch reaches precision " + std::to_string(precision),
                          lazy::config().max_epoch);
  };
}

ApproxRing ring_at_epoch(const ApproxPoly& g, ExtensionMode mode, std::uint64_t family,
                         const PolySource& source) {
  ApproxRing::Rebuild rebuild;
  if (source) rebuild = make_rebuild(source, mode, family);
  return ApproxRing::extend(g.ring(), g.coeffs(), mode, family, std::move(rebuild));
}

std::shared_ptr<detail::StructureInfo> prime_info(const mpz_class& p, bool field) {
  if (!is_probable_prime(p)) throw DomainError("not a prime: " + p.get_str());
  auto info = std::make_shared<detail::StructureInfo>();
  info->p = p;
  info->field = field;
  info->family = ApproxRing::fresh_family();
  info->node = lazy::make_node(Type::ring, kinds().prime,
                               {Dep::value(p), Dep::value(static_cast<std::int64_t>(info->family)),
                                Dep::value(std::int64_t{field ? 1 : 0})});
  return info;
}

NodePtr element_node(int kind, std::vector<Dep> deps, const ExactStructure& parent, int min_epoch = 1) {
  return lazy::make_node(Type::element, kind, std::move(deps), parent.node(), min_epoch);
}

ExactStructure common_parent(const ExactElement& x, const ExactElement& y) {
  if (x.parent() == y.parent()) return x.parent();
  if (x.parent().level() >= y.parent().level()) return x.parent();
  return y.parent();
}

}  // namespace

// ------------------------------------------------------------ ExactStructure

ExactStructure ExactStructure::prime_field(const mpz_class& p) {
  return ExactStructure(prime_info(p, true));
}

ExactStructure ExactStructure::prime_ring(const mpz_class& p) {
  return ExactStructure(prime_info(p, false));
}

ExactStructure ExactStructure::extension(const ExactStructure& base, const ExactPoly& f,
                                         ExtensionMode mode) {
  if (!(f.base() == base)) throw DomainError("defining polynomial is not over the base");
  if (f.degree() < 2) throw DomainError("defining polynomial must have degree at least 2");
  auto info = std::make_shared<detail::StructureInfo>();
  info->p = base.prime();
  info->field = base.is_field();
  info->level = base.level() + 1;
  info->family = ApproxRing::fresh_family();
  info->mode = mode;
  info->base = base.info_;
  info->defining = f;
  const auto d = static_cast<std::int64_t>(f.degree());
  info->e = base.ramification_index() * (mode == ExtensionMode::eisenstein ? d : 1);
  info->f = base.residue_degree() * (mode == ExtensionMode::unramified ? d : 1);

  const NodePtr f_node = f.node();
  const PolySource source = std::make_shared<const lazy::UserFunction>(lazy::UserFunction{
      [f_node](int n, const Args&) -> Value { return lazy::approximation(f_node, n); },
      "defining polynomial"});

  // Find the first epoch at which the extension test passes.
  const int budget = lazy::config().max_epoch;
  int min_epoch = 0;
  for (int n = 1; n <= budget && min_epoch == 0; ++n) {
    const ApproxPoly g = f.at(n);
    try {
      ring_at_epoch(g, mode, info->family, nullptr);
      min_epoch = n;
    } catch (const DomainError&) {
      if (extension_test_final(g, mode)) throw;
    }
  }
  if (min_epoch == 0) {
    throw BudgetExhausted("defining polynomial never passes the extension test", budget);
  }
  info->node = lazy::make_node(Type::ring, kinds().extension,
                               {Dep::lazy(base.node()), Dep::lazy(f.node()),
                                Dep::value(static_cast<std::int64_t>(mode)),
                                Dep::value(static_cast<std::int64_t>(info->family)),
                                Dep::value(source)},
                               nullptr, min_epoch);
  return ExactStructure(std::move(info));
}

const NodePtr& ExactStructure::node() const { return info_->node; }

ApproxRing ExactStructure::at(int epoch, std::optional<int> budget) const {
  return std::get<ApproxRing>(lazy::approximation(info_->node, epoch, budget));
}

const mpz_class& ExactStructure::prime() const { return info_->p; }
bool ExactStructure::is_field() const { return info_->field; }
int ExactStructure::level() const { return info_->level; }
std::uint64_t ExactStructure::family() const { return info_->family; }
std::int64_t ExactStructure::ramification_index() const { return info_->e; }
std::int64_t ExactStructure::residue_degree() const { return info_->f; }
std::optional<ExtensionMode> ExactStructure::mode() const { return info_->mode; }
std::optional<ExactStructure> ExactStructure::base() const {
  if (!info_->base) return std::nullopt;
  return ExactStructure(info_->base);
}
std::optional<ExactPoly> ExactStructure::defining_polynomial() const { return info_->defining; }

ExactPolyRing ExactStructure::polynomials() const {
  if (!info_->poly_ring) {
    info_->poly_ring = lazy::make_node(Type::poly_ring, kinds().poly_ring, {Dep::lazy(info_->node)},
                                       info_->node);
  }
  return ExactPolyRing(info_->poly_ring, *this);
}

// -------------------------------------------------------------- ExactElement

ExactElement ExactElement::from_rational(const ExactStructure& s, const mpq_class& q) {
  if (!s.is_field() && sgn(q) != 0 && valuation(q, s.prime()) < 0) {
    throw DomainError("rational has negative valuation in an integer ring");
  }
  return ExactElement(element_node(kinds().rational, {Dep::lazy(s.node()), Dep::value(q)}, s), s);
}

ExactElement ExactElement::from_integer(const ExactStructure& s, const mpz_class& n) {
  return from_rational(s, mpq_class(n));
}

ExactElement ExactElement::from_base(const ExactStructure& s, const ExactElement& x) {
  auto b = s.base();
  if (!b) throw DomainError("the prime ring has no base");
  const ExactElement inner = coerce(*b, x);
  return ExactElement(element_node(kinds().from_base, {Dep::lazy(s.node()), Dep::lazy(inner.node())}, s), s);
}

ExactElement ExactElement::uniformizer(const ExactStructure& s) {
  return ExactElement(element_node(kinds().uniformizer, {Dep::lazy(s.node())}, s), s);
}

ExactElement ExactElement::generator(const ExactStructure& s) {
  return ExactElement(element_node(kinds().generator, {Dep::lazy(s.node())}, s), s);
}

ExactElement ExactElement::zero(const ExactStructure& s) {
  return ExactElement(element_node(kinds().zero, {Dep::lazy(s.node())}, s), s);
}

ExactElement ExactElement::from_node(const ExactStructure& s, NodePtr node) {
  if (node->type() != Type::element) throw DomainError("not an element node");
  return ExactElement(std::move(node), s);
}

ExactElement ExactElement::coerce(const ExactStructure& s, const ExactElement& x) {
  if (x.parent() == s) return x;
  if (s.level() <= x.parent().level()) {
    throw DomainError("element does not lie in a subring of the target structure");
  }
  return from_base(s, x);
}

ApproxElement ExactElement::at(int epoch, std::optional<int> budget) const {
  return std::get<ApproxElement>(lazy::approximation(node_, epoch, budget));
}

ExactElement ExactElement::operator-() const {
  return ExactElement(element_node(kinds().neg, {Dep::lazy(node_)}, parent_), parent_);
}

ExactElement operator+(const ExactElement& x, const ExactElement& y) {
  const ExactStructure s = common_parent(x, y);
  return ExactElement(element_node(kinds().add, {Dep::lazy(ExactElement::coerce(s, x).node()),
                                                 Dep::lazy(ExactElement::coerce(s, y).node())},
                                   s),
                      s);
}

ExactElement operator-(const ExactElement& x, const ExactElement& y) {
  const ExactStructure s = common_parent(x, y);
  return ExactElement(element_node(kinds().sub, {Dep::lazy(ExactElement::coerce(s, x).node()),
                                                 Dep::lazy(ExactElement::coerce(s, y).node())},
                                   s),
                      s);
}

ExactElement operator*(const ExactElement& x, const ExactElement& y) {
  const ExactStructure s = common_parent(x, y);
  return ExactElement(element_node(kinds().mul, {Dep::lazy(ExactElement::coerce(s, x).node()),
                                                 Dep::lazy(ExactElement::coerce(s, y).node())},
                                   s),
                      s);
}

ExactElement operator/(const ExactElement& x, const ExactElement& y) {
  const ExactStructure s = common_parent(x, y);
  const ExactElement yy = ExactElement::coerce(s, y);
  const int budget = lazy::config().max_epoch;
  int min_epoch = 0;
  std::optional<std::int64_t> last;
  for (int n = 1; n <= budget; ++n) {
    const ApproxElement approx = yy.at(n, budget);
    if (!approx.is_weakly_zero()) {
      min_epoch = n;
      break;
    }
    last = approx.weak_valuation();
    if (approx.is_precise_zero()) break;
  }
  if (min_epoch == 0) throw BudgetExhausted("cannot certify divisor nonzero", budget, last);
  if (!s.is_field()) {
    // The integer ring only admits quotients of non-negative valuation.
    const ApproxElement a = yy.at(min_epoch);
    if (a.weak_valuation() > 0) {
      throw DomainError("division by a non-unit in an integer ring");
    }
  }
  return ExactElement(
      element_node(kinds().div, {Dep::lazy(ExactElement::coerce(s, x).node()), Dep::lazy(yy.node())},
                   s, min_epoch),
      s);
}

ExactElement ExactElement::pow(std::int64_t n) const {
  if (n < 0) return from_integer(parent_, 1) / pow(-n);
  return ExactElement(element_node(kinds().pow, {Dep::lazy(node_), Dep::value(n)}, parent_), parent_);
}

// ----------------------------------------------------------------- ExactPoly

ExactPoly ExactPoly::from_coeffs(const ExactPolyRing& r, const std::vector<ExactElement>& coeffs) {
  if (coeffs.empty()) throw DomainError("polynomial needs at least one coefficient");
  std::vector<Dep> deps{Dep::lazy(r.node())};
  for (const auto& c : coeffs) {
    if (!(c.parent() == r.base())) {
      if (c.parent().level() >= r.base().level()) {
        throw DomainError("coefficient from a different structure");
      }
      deps.push_back(Dep::lazy(ExactElement::coerce(r.base(), c).node()));
    } else {
      deps.push_back(Dep::lazy(c.node()));
    }
  }
  auto node = lazy::make_node(Type::poly, kinds().p_coeffs, std::move(deps), r.node());
  return ExactPoly(std::move(node), r, coeffs.size() - 1);
}

ExactPoly ExactPoly::from_rationals(const ExactStructure& s, const std::vector<mpq_class>& coeffs) {
  std::vector<ExactElement> c;
  for (const auto& q : coeffs) {
    c.push_back(sgn(q) == 0 ? ExactElement::zero(s) : ExactElement::from_rational(s, q));
  }
  return from_coeffs(s.polynomials(), c);
}

ExactPoly ExactPoly::from_node(const ExactPolyRing& r, NodePtr node, std::size_t degree) {
  if (node->type() != Type::poly) throw DomainError("not a polynomial node");
  return ExactPoly(std::move(node), r, degree);
}

ApproxPoly ExactPoly::at(int epoch, std::optional<int> budget) const {
  return std::get<ApproxPoly>(lazy::approximation(node_, epoch, budget));
}

namespace {

void require_same_ring(const ExactPoly& f, const ExactPoly& g) {
  if (!(f.base() == g.base())) throw DomainError("polynomials over different structures");
}

}  // namespace

ExactPoly operator+(const ExactPoly& f, const ExactPoly& g) {
  require_same_ring(f, g);
  auto node = lazy::make_node(Type::poly, kinds().p_add, {Dep::lazy(f.node()), Dep::lazy(g.node())},
                              f.parent().node());
  return ExactPoly(std::move(node), f.parent(), std::max(f.degree(), g.degree()));
}

ExactPoly operator-(const ExactPoly& f, const ExactPoly& g) {
  require_same_ring(f, g);
  auto node = lazy::make_node(Type::poly, kinds().p_sub, {Dep::lazy(f.node()), Dep::lazy(g.node())},
                              f.parent().node());
  return ExactPoly(std::move(node), f.parent(), std::max(f.degree(), g.degree()));
}

ExactPoly operator*(const ExactPoly& f, const ExactPoly& g) {
  require_same_ring(f, g);
  auto node = lazy::make_node(Type::poly, kinds().p_mul, {Dep::lazy(f.node()), Dep::lazy(g.node())},
                              f.parent().node());
  return ExactPoly(std::move(node), f.parent(), f.degree() + g.degree());
}

ExactPoly ExactPoly::times(const ExactElement& c) const {
  const ExactElement cc = ExactElement::coerce(base(), c);
  auto node = lazy::make_node(Type::poly, kinds().p_times, {Dep::lazy(node_), Dep::lazy(cc.node())},
                              parent_.node());
  return ExactPoly(std::move(node), parent_, degree_);
}

ExactPoly ExactPoly::derivative() const {
  auto node = lazy::make_node(Type::poly, kinds().p_derivative, {Dep::lazy(node_)}, parent_.node());
  return ExactPoly(std::move(node), parent_, degree_ == 0 ? 0 : degree_ - 1);
}

ExactPoly ExactPoly::shift(const ExactElement& a) const {
  const ExactElement aa = ExactElement::coerce(base(), a);
  auto node = lazy::make_node(Type::poly, kinds().p_shift, {Dep::lazy(node_), Dep::lazy(aa.node())},
                              parent_.node());
  return ExactPoly(std::move(node), parent_, degree_);
}

ExactPoly ExactPoly::scale(std::int64_t j, std::int64_t k) const {
  auto node = lazy::make_node(Type::poly, kinds().p_scale,
                              {Dep::lazy(node_), Dep::value(j), Dep::value(k)}, parent_.node());
  return ExactPoly(std::move(node), parent_, degree_);
}

ExactPoly ExactPoly::exact_quotient(const ExactPoly& g) const {
  require_same_ring(*this, g);
  if (g.degree() > degree_) throw DomainError("divisor has larger degree");
  auto node = lazy::make_node(Type::poly, kinds().p_quotient, {Dep::lazy(node_), Dep::lazy(g.node())},
                              parent_.node());
  return ExactPoly(std::move(node), parent_, degree_ - g.degree());
}

ExactElement ExactPoly::evaluate(const ExactElement& a) const {
  const ExactElement aa = ExactElement::coerce(base(), a);
  return ExactElement::from_node(
      base(), lazy::make_node(Type::element, kinds().evaluate, {Dep::lazy(node_), Dep::lazy(aa.node())},
                              base().node()));
}

ExactElement ExactPoly::coefficient(std::size_t i) const {
  if (i > degree_) throw DomainError("coefficient index out of range");
  return ExactElement::from_node(
      base(), lazy::make_node(Type::element, kinds().coefficient,
                              {Dep::lazy(node_), Dep::value(static_cast<std::int64_t>(i))}, base().node()));
}

}  // namespace xpadic
