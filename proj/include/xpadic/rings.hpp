#pragma once

// Exact p-adic rings, elements and polynomials, each backed by a lazy node.
// The epoch-n approximation of Q_p or Z_p has precision 2^n; an extension at
// epoch n is the base at epoch n extended by the defining polynomial at
// epoch n.

#include <gmpxx.h>

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "xpadic/approx.hpp"
#include "xpadic/approx_poly.hpp"
#include "xpadic/lazy.hpp"

namespace xpadic {

class ExactElement;
class ExactPoly;
class ExactPolyRing;

namespace detail {
struct StructureInfo;
}

class ExactStructure {
 public:
  static ExactStructure prime_field(const mpz_class& p);
  static ExactStructure prime_ring(const mpz_class& p);
  /// The defining polynomial is checked at the first epoch where the
  /// inertial/Eisenstein test is decidable; that epoch becomes min_epoch.
  static ExactStructure extension(const ExactStructure& base, const ExactPoly& f,
                                  ExtensionMode mode);

  const lazy::NodePtr& node() const;
  ApproxRing at(int epoch, std::optional<int> budget = std::nullopt) const;

  const mpz_class& prime() const;
  bool is_field() const;
  int level() const;
  std::uint64_t family() const;
  std::int64_t ramification_index() const;
  std::int64_t residue_degree() const;
  std::optional<ExtensionMode> mode() const;
  std::optional<ExactStructure> base() const;
  std::optional<ExactPoly> defining_polynomial() const;

  /// Polynomial ring over this structure (one node, created on first use).
  ExactPolyRing polynomials() const;

  bool operator==(const ExactStructure& o) const { return info_ == o.info_; }

 private:
  explicit ExactStructure(std::shared_ptr<detail::StructureInfo> info) : info_(std::move(info)) {}
  std::shared_ptr<detail::StructureInfo> info_;
  friend class ExactPolyRing;
};

class ExactElement {
 public:
  static ExactElement from_rational(const ExactStructure& s, const mpq_class& q);
  static ExactElement from_integer(const ExactStructure& s, const mpz_class& n);
  /// x must live in the base of s (or further down the tower).
  static ExactElement from_base(const ExactStructure& s, const ExactElement& x);
  static ExactElement uniformizer(const ExactStructure& s);
  static ExactElement generator(const ExactStructure& s);
  static ExactElement zero(const ExactStructure& s);
  /// Wraps an existing element node (e.g. built by make_user_node).
  static ExactElement from_node(const ExactStructure& s, lazy::NodePtr node);

  const lazy::NodePtr& node() const { return node_; }
  const ExactStructure& parent() const { return parent_; }
  ApproxElement at(int epoch, std::optional<int> budget = std::nullopt) const;

  ExactElement operator-() const;
  friend ExactElement operator+(const ExactElement& x, const ExactElement& y);
  friend ExactElement operator-(const ExactElement& x, const ExactElement& y);
  friend ExactElement operator*(const ExactElement& x, const ExactElement& y);
  /// min_epoch of the quotient is the first epoch where y is not weakly
  /// zero; throws BudgetExhausted if no such epoch exists within budget.
  friend ExactElement operator/(const ExactElement& x, const ExactElement& y);
  ExactElement pow(std::int64_t n) const;

  /// Moves x into s through the base chain of s.
  static ExactElement coerce(const ExactStructure& s, const ExactElement& x);

 private:
  ExactElement(lazy::NodePtr node, ExactStructure parent)
      : node_(std::move(node)), parent_(std::move(parent)) {}
  lazy::NodePtr node_;
  ExactStructure parent_;
};

class ExactPolyRing {
 public:
  const lazy::NodePtr& node() const { return node_; }
  const ExactStructure& base() const { return base_; }

 private:
  friend class ExactStructure;
  ExactPolyRing(lazy::NodePtr node, ExactStructure base)
      : node_(std::move(node)), base_(std::move(base)) {}
  lazy::NodePtr node_;
  ExactStructure base_;
};

class ExactPoly {
 public:
  /// Coefficients low to high; the degree bound is coeffs.size() - 1.
  static ExactPoly from_coeffs(const ExactPolyRing& r, const std::vector<ExactElement>& coeffs);
  static ExactPoly from_rationals(const ExactStructure& s, const std::vector<mpq_class>& coeffs);
  static ExactPoly from_node(const ExactPolyRing& r, lazy::NodePtr node, std::size_t degree);

  const lazy::NodePtr& node() const { return node_; }
  const ExactPolyRing& parent() const { return parent_; }
  const ExactStructure& base() const { return parent_.base(); }
  std::size_t degree() const { return degree_; }
  ApproxPoly at(int epoch, std::optional<int> budget = std::nullopt) const;

  friend ExactPoly operator+(const ExactPoly& f, const ExactPoly& g);
  friend ExactPoly operator-(const ExactPoly& f, const ExactPoly& g);
  friend ExactPoly operator*(const ExactPoly& f, const ExactPoly& g);
  ExactPoly times(const ExactElement& c) const;
  ExactPoly derivative() const;
  /// f(x + a).
  ExactPoly shift(const ExactElement& a) const;
  /// pi^j * f(pi^k * x).
  ExactPoly scale(std::int64_t j, std::int64_t k) const;
  /// Quotient of f by a monic g, assuming g divides f.
  ExactPoly exact_quotient(const ExactPoly& g) const;
  ExactElement evaluate(const ExactElement& a) const;
  ExactElement coefficient(std::size_t i) const;

 private:
  ExactPoly(lazy::NodePtr node, ExactPolyRing parent, std::size_t degree)
      : node_(std::move(node)), parent_(std::move(parent)), degree_(degree) {}
  lazy::NodePtr node_;
  ExactPolyRing parent_;
  std::size_t degree_;
};

}  // namespace xpadic
