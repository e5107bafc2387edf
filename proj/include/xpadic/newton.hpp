#pragma once

// Newton polygons from partial-precision data, Hensel root lifting and
// splitting of polynomials along the faces of their Newton polygon.

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "xpadic/approx_poly.hpp"
#include "xpadic/rings.hpp"

namespace xpadic {

struct Vertex {
  std::int64_t i;
  mpq_class v;

  friend bool operator==(const Vertex& a, const Vertex& b) { return a.i == b.i && a.v == b.v; }
};

struct Face {
  Vertex left;
  Vertex right;

  std::int64_t width() const { return right.i - left.i; }
  mpq_class height() const { return left.v - right.v; }
  mpq_class slope() const { return (right.v - left.v) / mpq_class(width()); }
};

class NewtonPolygon {
 public:
  NewtonPolygon() = default;
  /// Lower convex hull of the points; collinear points are merged so that
  /// every returned vertex is a corner.
  static NewtonPolygon hull(std::vector<Vertex> points);

  const std::vector<Vertex>& vertices() const { return vertices_; }
  std::vector<Face> faces() const;
  std::int64_t left() const { return vertices_.front().i; }
  std::int64_t right() const { return vertices_.back().i; }
  /// Value of the piecewise linear function at x in [left, right].
  mpq_class at(const mpq_class& x) const;

  friend bool operator==(const NewtonPolygon& a, const NewtonPolygon& b) {
    return a.vertices_ == b.vertices_;
  }

 private:
  std::vector<Vertex> vertices_;
};

struct Interval {
  std::int64_t lo;
  std::int64_t hi;

  friend bool operator==(const Interval&, const Interval&) = default;
};

/// The lower polygon uses every coefficient that is not a precise zero (at
/// its weak valuation); the upper polygon only those whose valuation is
/// known. On the agreement intervals both equal the Newton polygon.
struct PolygonPair {
  NewtonPolygon lower;
  std::optional<NewtonPolygon> upper;
  std::vector<Interval> agreement;

  bool resolved() const { return upper && *upper == lower; }
};

PolygonPair lower_upper_polygons(const ApproxPoly& f);
PolygonPair lower_upper_polygons(const std::vector<Vertex>& all, const std::vector<Vertex>& known);

struct PolygonResult {
  NewtonPolygon polygon;
  int epoch;  // first epoch at which it was resolved
};

/// Exact Newton polygon of f, raising BudgetExhausted if some coefficient's
/// valuation never resolves.
PolygonResult newton_polygon(const ExactPoly& f, std::optional<int> budget = std::nullopt);

struct HenselResult {
  bool liftable = false;
  std::optional<ExactElement> root;
  int epoch = 0;  // epoch at which the question was decided
  /// Newton steps taken by the root's get-approx, per epoch.
  std::shared_ptr<std::map<int, int>> iterations;
};

/// Decides whether the root of f closest to a is unique (the first face of
/// the Newton polygon of f(x + a) has width 1) and if so returns it as a
/// lazy element.
HenselResult is_hensel_liftable(const ExactPoly& f, const ExactElement& a,
                                std::optional<int> budget = std::nullopt);

enum class SplitOutcome { split, irreducible, requires_further_methods };

struct SplitResult {
  SplitOutcome outcome;
  std::vector<ExactPoly> factors;  // one per face when split, else {f}
  NewtonPolygon polygon;
  int epoch;  // epoch at which the polygon was resolved
};

/// Factors a monic f into one monic factor per face of its Newton polygon.
SplitResult segment_split(const ExactPoly& f, std::optional<int> budget = std::nullopt);

const char* to_string(SplitOutcome o);

}  // namespace xpadic
