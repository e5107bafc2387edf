#pragma once

// Fixed-precision ("zealous") p-adic arithmetic.
//
// An ApproxRing is Z_p or Q_p, or a tower of unramified and Eisenstein
// extensions over it, at a fixed working precision. An ApproxElement is the
// residue class pi^v * u + pi^(v+k) * O with u a unit whenever k > 0.

#include <gmpxx.h>

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "xpadic/integer.hpp"

namespace xpadic {

enum class ExtensionMode { unramified, eisenstein };

/// An element of the integer ring of some tower level, stored modulo a power
/// of that level's uniformizer. At the prime level only `z` is used; at an
/// extension level `c` holds the coefficients over the base in the basis
/// 1, t, ..., t^(d-1) where t is the generator of the step.
struct Integral {
  mpz_class z;
  std::vector<Integral> c;

  friend bool operator==(const Integral&, const Integral&) = default;
};

class ApproxElement;
class ApproxRing;

namespace detail {
struct RingData;
}

class ApproxRing {
 public:
  /// Supplies the same exact ring at another precision (in digits of this
  /// ring's uniformizer). Installed by the exact layer.
  using Rebuild = std::function<ApproxRing(std::int64_t precision)>;

  /// Z_p (field=false) or Q_p (field=true) with relative precision cap W.
  /// A fresh family token is drawn unless one is supplied.
  static ApproxRing prime(const mpz_class& p, std::int64_t precision, bool field = true,
                          std::optional<std::uint64_t> family = std::nullopt);

  /// Extension of `base` by the monic polynomial with coefficients
  /// g[0], ..., g[d] (g[d] weakly equal to 1). Throws DomainError if g fails
  /// the inertial resp. Eisenstein test at the precision it carries.
  static ApproxRing extend(const ApproxRing& base, std::span<const ApproxElement> g,
                           ExtensionMode mode,
                           std::optional<std::uint64_t> family = std::nullopt,
                           Rebuild rebuild = {});

  /// Same family at another precision cap. Lowering never needs more data;
  /// raising an extension requires defining data at the higher precision.
  ApproxRing change_precision(std::int64_t precision) const;

  static std::uint64_t fresh_family();

  const mpz_class& prime_number() const;
  /// Cap on relative precision, in digits of this ring's uniformizer.
  std::int64_t precision() const;
  std::uint64_t family() const;
  bool is_field() const;
  /// Number of extension steps above the prime ring.
  int level() const;
  std::optional<ExtensionMode> mode() const;
  /// Degree of the top step (1 for the prime ring).
  std::int64_t step_degree() const;
  /// Absolute ramification index and residue degree.
  std::int64_t ramification_index() const;
  std::int64_t residue_degree() const;
  /// Precision (in base digits) carried by the defining polynomial.
  std::int64_t defining_precision() const;
  std::optional<ApproxRing> base() const;
  /// Defining polynomial of the top step as base elements (monic, leading 1).
  std::vector<ApproxElement> defining_polynomial() const;

  /// Same family and same precision cap.
  friend bool operator==(const ApproxRing& a, const ApproxRing& b);
  bool same_family(const ApproxRing& other) const { return family() == other.family(); }

  std::string describe() const;

  const detail::RingData& data() const { return *d_; }
  const std::shared_ptr<const detail::RingData>& data_ptr() const { return d_; }
  explicit ApproxRing(std::shared_ptr<const detail::RingData> d) : d_(std::move(d)) {}

 private:
  std::shared_ptr<const detail::RingData> d_;
};

class ApproxElement {
 public:
  static ApproxElement precise_zero(const ApproxRing& ring);
  /// 0 + O(pi^n).
  static ApproxElement weak_zero(const ApproxRing& ring, std::int64_t absolute_precision);
  static ApproxElement from_integer(const ApproxRing& ring, const mpz_class& n);
  /// a/b with relative precision equal to the ring cap (less in ramified
  /// extensions when the value is not a unit, see from_base).
  static ApproxElement from_rational(const ApproxRing& ring, const mpq_class& q);
  /// Embeds an element of the immediate base ring.
  static ApproxElement from_base(const ApproxRing& ring, const ApproxElement& x);
  static ApproxElement uniformizer(const ApproxRing& ring);
  /// The root of the defining polynomial of the top step; p for the prime ring.
  static ApproxElement generator(const ApproxRing& ring);
  /// pi^v * unit + O(pi^(v+k)); `unit` need not be normalized.
  static ApproxElement from_parts(const ApproxRing& ring, std::int64_t v, std::int64_t k,
                                  Integral unit);

  const ApproxRing& ring() const { return ring_; }
  std::int64_t weak_valuation() const { return v_; }
  std::int64_t relative_precision() const { return k_; }
  std::int64_t absolute_precision() const { return sat_add(v_, k_); }
  bool is_weakly_zero() const { return k_ == 0; }
  bool is_precise_zero() const { return v_ == kInfinity; }
  /// True iff the weak valuation is the valuation.
  bool valuation_known() const { return k_ > 0 || v_ == kInfinity; }
  const Integral& unit() const { return unit_; }

  ApproxElement operator-() const;
  friend ApproxElement operator+(const ApproxElement& x, const ApproxElement& y);
  friend ApproxElement operator-(const ApproxElement& x, const ApproxElement& y);
  friend ApproxElement operator*(const ApproxElement& x, const ApproxElement& y);
  /// Throws PrecisionError if y is weakly zero.
  friend ApproxElement operator/(const ApproxElement& x, const ApproxElement& y);
  ApproxElement pow(std::int64_t n) const;

  /// Exact multiplication by pi^s.
  ApproxElement shifted(std::int64_t s) const;
  /// Lowers the absolute precision to at most n.
  ApproxElement truncated(std::int64_t absolute_precision) const;
  /// Moves the element into another ring of the same family.
  ApproxElement coerce_to(const ApproxRing& target) const;
  /// Residue class in the residue field, as an integral at precision 1.
  /// Requires weak valuation >= 0.
  Integral residue() const;

  /// Canonical series form, e.g. "1 + 2 + 2^2 + O(2^4)".
  std::string to_string() const;

 private:
  ApproxElement(ApproxRing ring, std::int64_t v, std::int64_t k, Integral unit)
      : ring_(std::move(ring)), v_(v), k_(k), unit_(std::move(unit)) {}
  static ApproxElement normalized(const ApproxRing& ring, std::int64_t v, std::int64_t n,
                                  Integral value);

  ApproxRing ring_;
  std::int64_t v_;
  std::int64_t k_;
  Integral unit_;
};

/// True iff x - y is weakly zero. Throws DomainError across families.
bool weakly_equal(const ApproxElement& x, const ApproxElement& y);

struct Inspection {
  std::int64_t weak_valuation;
  std::int64_t absolute_precision;
  std::int64_t relative_precision;
  bool is_weakly_zero;
  bool is_precise_zero;
  bool valuation_known;

  friend bool operator==(const Inspection&, const Inspection&) = default;
};

Inspection inspect(const ApproxElement& x);

}  // namespace xpadic
