#include "xpadic/newton.hpp"

#include <algorithm>

#include "xpadic/errors.hpp"
#include "xpadic/integer.hpp"

namespace xpadic {

namespace {

mpq_class cross(const Vertex& o, const Vertex& a, const Vertex& b) {
  return mpq_class(static_cast<long>(a.i - o.i)) * (b.v - o.v) - (a.v - o.v) * mpq_class(static_cast<long>(b.i - o.i));
}

mpz_class floor_q(const mpq_class& q) {
  mpz_class r;
  mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

mpz_class ceil_q(const mpq_class& q) {
  mpz_class r;
  mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

int resolve_budget(std::optional<int> budget) { return budget.value_or(lazy::config().max_epoch); }

}  // namespace

NewtonPolygon NewtonPolygon::hull(std::vector<Vertex> points) {
  if (points.empty()) throw DomainError("Newton polygon of no points");
  std::sort(points.begin(), points.end(), [](const Vertex& a, const Vertex& b) {
    return a.i != b.i ? a.i < b.i : a.v < b.v;
  });
  NewtonPolygon out;
  auto& h = out.vertices_;
  for (const Vertex& p : points) {
    if (!h.empty() && h.back().i == p.i) continue;  // keep the lowest point per index
    while (h.size() >= 2 && cross(h[h.size() - 2], h.back(), p) <= 0) h.pop_back();
    h.push_back(p);
  }
  return out;
}

std::vector<Face> NewtonPolygon::faces() const {
  std::vector<Face> out;
  for (std::size_t t = 0; t + 1 < vertices_.size(); ++t) out.push_back({vertices_[t], vertices_[t + 1]});
  return out;
}

mpq_class NewtonPolygon::at(const mpq_class& x) const {
  if (x < left() || x > right()) throw DomainError("point outside the polygon's range");
  for (std::size_t t = 0; t + 1 < vertices_.size(); ++t) {
    const Vertex& a = vertices_[t];
    const Vertex& b = vertices_[t + 1];
    if (x <= b.i) return a.v + (b.v - a.v) * (x - a.i) / mpq_class(static_cast<long>(b.i - a.i));
  }
  return vertices_.back().v;
}

PolygonPair lower_upper_polygons(const std::vector<Vertex>& all, const std::vector<Vertex>& known) {
  PolygonPair out;
  out.lower = NewtonPolygon::hull(all);
  if (known.empty()) return out;
  out.upper = NewtonPolygon::hull(known);
  const NewtonPolygon& lo = out.lower;
  const NewtonPolygon& up = *out.upper;

  std::vector<std::int64_t> xs;
  for (const auto& v : lo.vertices()) {
    if (v.i >= up.left() && v.i <= up.right()) xs.push_back(v.i);
  }
  for (const auto& v : up.vertices()) xs.push_back(v.i);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

  // Both polygons are linear between consecutive breakpoints, so they agree
  // on a whole segment iff they agree at its ends.
  for (std::size_t t = 0; t + 1 < xs.size(); ++t) {
    const std::int64_t a = xs[t], b = xs[t + 1];
    if (lo.at(a) != up.at(a) || lo.at(b) != up.at(b)) continue;
    if (!out.agreement.empty() && out.agreement.back().hi == a) {
      out.agreement.back().hi = b;
    } else {
      out.agreement.push_back({a, b});
    }
  }
  return out;
}

PolygonPair lower_upper_polygons(const ApproxPoly& f) {
  std::vector<Vertex> all, known;
  for (std::size_t i = 0; i < f.coeffs().size(); ++i) {
    const ApproxElement& c = f.coeff(i);
    if (c.is_precise_zero()) continue;
    const Vertex v{static_cast<std::int64_t>(i), mpq_class(static_cast<long>(c.weak_valuation()))};
    all.push_back(v);
    if (c.valuation_known()) known.push_back(v);
  }
  if (all.empty()) throw DomainError("Newton polygon of the zero polynomial");
  return lower_upper_polygons(all, known);
}

PolygonResult newton_polygon(const ExactPoly& f, std::optional<int> budget) {
  const int limit = resolve_budget(budget);
  for (int n = 1; n <= limit; ++n) {
    PolygonPair pair = lower_upper_polygons(f.at(n, limit));
    if (pair.resolved()) return {pair.lower, n};
  }
  throw BudgetExhausted("Newton polygon not resolved within the epoch budget (a coefficient may be zero)",
                        limit, std::nullopt);
}

namespace {

constexpr int kMaxNewtonSteps = 400;

bool all_weakly_zero(const ApproxPoly& f) {
  return std::all_of(f.coeffs().begin(), f.coeffs().end(),
                     [](const ApproxElement& c) { return c.is_weakly_zero(); });
}

ApproxPoly monomial(const ApproxRing& r, std::size_t m) {
  std::vector<ApproxElement> c(m + 1, ApproxElement::precise_zero(r));
  c[m] = ApproxElement::from_integer(r, 1);
  return ApproxPoly(r, std::move(c));
}

ApproxPoly mod(const ApproxPoly& f, const ApproxPoly& g) { return f.divrem_monic(g).second; }

// Inverse of h modulo the monic g, assuming h(0) is a unit and g is
// congruent to x^m modulo pi, so that 1 - h*z lies in the maximal ideal.
ApproxPoly inverse_mod(const ApproxPoly& h, const ApproxPoly& g) {
  const ApproxRing& r = h.ring();
  const ApproxPoly one(r, {ApproxElement::from_integer(r, 1)});
  const ApproxPoly two(r, {ApproxElement::from_integer(r, 2)});
  ApproxPoly z(r, {ApproxElement::from_integer(r, 1) / h.coeff(0)});
  for (int step = 0; step < kMaxNewtonSteps; ++step) {
    const ApproxPoly hz = mod(h * z, g);
    if (all_weakly_zero(one - hz)) return z;
    z = mod(z * (two - hz), g);
  }
  throw PrecisionError("inverse modulo a factor did not converge");
}

// Monic G of degree m dividing g with G = x^m mod pi; g must be integral
// with g_m a unit and g_i divisible by pi for i < m.
ApproxPoly lift_factor(const ApproxPoly& g, std::size_t m) {
  ApproxPoly G = monomial(g.ring(), m);
  for (int step = 0; step < kMaxNewtonSteps; ++step) {
    auto [q, rem] = g.divrem_monic(G);
    if (all_weakly_zero(rem)) return G;
    G = G + mod(rem * inverse_mod(q, G), G);
  }
  throw PrecisionError("factor lifting did not converge");
}

}  // namespace

HenselResult is_hensel_liftable(const ExactPoly& f, const ExactElement& a0, std::optional<int> budget) {
  const int limit = resolve_budget(budget);
  if (f.degree() < 1) throw DomainError("Hensel lifting needs a polynomial of degree >= 1");
  const ExactElement a = ExactElement::coerce(f.base(), a0);
  const ExactPoly h = f.shift(a);
  HenselResult out;
  for (int n = 1; n <= limit; ++n) {
    const ApproxPoly H = h.at(n, limit);
    const ApproxElement& c0 = H.coeff(0);
    const ApproxElement& c1 = H.coeff(1);
    if (c0.is_precise_zero() && c1.is_precise_zero()) {
      out.epoch = n;
      return out;  // a is a multiple root
    }
    if (!c1.is_precise_zero() && c1.valuation_known()) {
      const std::int64_t u1 = c1.weak_valuation();
      std::optional<mpq_class> worst;  // max over i >= 2 of (u1 - w_i) / (i - 1)
      for (std::size_t i = 2; i < H.coeffs().size(); ++i) {
        const ApproxElement& c = H.coeff(i);
        if (c.is_precise_zero()) continue;
        const mpq_class t(mpq_class(static_cast<long>(u1 - c.weak_valuation())) / static_cast<long>(i - 1));
        if (!worst || t > *worst) worst = t;
      }
      const bool exact_root = c0.is_precise_zero();
      const std::int64_t s = exact_root ? kInfinity : c0.weak_valuation() - u1;
      if (!worst || exact_root || *worst < s) {
        // scaled model g(y) = pi^-j h(pi^k y): g_1 a unit, g_i (i >= 2)
        // divisible by pi, g_0 integral; Newton from y = 0 converges
        std::int64_t k;
        if (worst) {
          k = floor_q(*worst).get_si() + 1;
        } else {
          k = exact_root ? 0 : s;
        }
        const std::int64_t j = u1 + k;
        auto log = std::make_shared<std::map<int, int>>();
        auto fn = [j, k, log](int epoch, const lazy::Args& deps) -> lazy::Value {
          const ApproxPoly& hp = deps.get<ApproxPoly>(0);
          const ApproxRing& r = hp.ring();
          const ApproxElement base = deps.get<ApproxElement>(1).coerce_to(r);
          const ApproxPoly g = hp.scale(-j, k);
          const ApproxPoly dg = g.derivative();
          ApproxElement y = ApproxElement::precise_zero(r);
          int steps = 0;
          for (;; ++steps) {
            const ApproxElement gy = g.evaluate(y);
            if (gy.is_weakly_zero()) break;
            if (steps == kMaxNewtonSteps) throw PrecisionError("Newton iteration did not converge");
            y = y - gy / dg.evaluate(y);
          }
          (*log)[epoch] = steps;
          return base + y.shifted(k);
        };
        auto node = lazy::make_user_node(lazy::Type::element, f.base().node(), fn,
                                         {lazy::Dep::lazy(h.node()), lazy::Dep::lazy(a.node())},
                                         "hensel_root", n);
        out.liftable = true;
        out.root = ExactElement::from_node(f.base(), node);
        out.epoch = n;
        out.iterations = log;
        return out;
      }
    }
    if (!c0.is_precise_zero()) {
      const PolygonPair pair = lower_upper_polygons(H);
      if (pair.resolved() && pair.lower.faces().front().width() > 1) {
        out.epoch = n;
        return out;
      }
    }
  }
  throw BudgetExhausted("Hensel test not decided within the epoch budget", limit, std::nullopt);
}

namespace {

struct Splitter {
  int epoch;
  bool stuck = false;
  std::vector<ExactPoly> factors;

  // f is monic with the given (exact) polygon, normalized to start at 0.
  void run(const ExactPoly& f, const NewtonPolygon& polygon) {
    const auto& vs = polygon.vertices();
    if (vs.size() <= 2) {
      factors.push_back(f);
      return;
    }
    for (std::size_t t = 1; t + 1 < vs.size(); ++t) {
      const mpq_class left_slope = (vs[t].v - vs[t - 1].v) / mpq_class(static_cast<long>(vs[t].i - vs[t - 1].i));
      const mpq_class right_slope = (vs[t + 1].v - vs[t].v) / mpq_class(static_cast<long>(vs[t + 1].i - vs[t].i));
      // k in [-right_slope, -left_slope) moves the left roots into pi*O and
      // the right roots out of it
      const mpz_class kz = ceil_q(-right_slope);
      if (!(mpq_class(kz) < -left_slope)) continue;
      const std::int64_t k = kz.get_si();
      const std::int64_t m = vs[t].i;
      const std::int64_t j = vs[t].v.get_num().get_si() + m * k;
      auto fn = [j, k, m](int, const lazy::Args& deps) -> lazy::Value {
        const ApproxPoly g = deps.get<ApproxPoly>(0).scale(-j, k);
        return lift_factor(g, static_cast<std::size_t>(m)).scale(k * m, -k);
      };
      auto node = lazy::make_user_node(lazy::Type::poly, f.parent().node(), fn,
                                       {lazy::Dep::lazy(f.node())}, "segment_factor", epoch);
      const ExactPoly s = ExactPoly::from_node(f.parent(), node, static_cast<std::size_t>(m));
      const ExactPoly rest = f.exact_quotient(s);
      std::vector<Vertex> lo(vs.begin(), vs.begin() + static_cast<long>(t) + 1);
      for (auto& v : lo) v.v -= vs[t].v;
      std::vector<Vertex> hi(vs.begin() + static_cast<long>(t), vs.end());
      for (auto& v : hi) v.i -= m;
      run(s, NewtonPolygon::hull(lo));
      run(rest, NewtonPolygon::hull(hi));
      return;
    }
    stuck = true;
    factors.push_back(f);
  }
};

}  // namespace

SplitResult segment_split(const ExactPoly& f, std::optional<int> budget) {
  const PolygonResult pr = newton_polygon(f, budget);
  const NewtonPolygon& polygon = pr.polygon;
  const auto top = static_cast<std::int64_t>(f.degree());
  if (polygon.right() != top ||
      !weakly_equal(f.at(pr.epoch).coeff(f.degree()), ApproxElement::from_integer(f.at(pr.epoch).ring(), 1))) {
    throw DomainError("segment splitting needs a monic polynomial");
  }
  if (polygon.left() != 0) throw DomainError("segment splitting needs a nonzero constant coefficient");

  SplitResult out{SplitOutcome::split, {}, polygon, pr.epoch};
  const auto faces = polygon.faces();
  if (faces.size() == 1) {
    const mpq_class slope = faces[0].slope();
    out.outcome = slope.get_den() == faces[0].width() ? SplitOutcome::irreducible
                                                       : SplitOutcome::requires_further_methods;
    out.factors = {f};
    return out;
  }
  Splitter splitter;
  splitter.epoch = pr.epoch;
  splitter.run(f, polygon);
  out.factors = std::move(splitter.factors);
  if (splitter.stuck) out.outcome = SplitOutcome::requires_further_methods;
  return out;
}

const char* to_string(SplitOutcome o) {
  switch (o) {
    case SplitOutcome::split: return "split";
    case SplitOutcome::irreducible: return "irreducible";
    case SplitOutcome::requires_further_methods: return "requires_further_methods";
  }
  return "?";
}

}  // namespace xpadic
