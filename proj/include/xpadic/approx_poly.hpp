#pragma once

// Dense univariate polynomials over an ApproxRing, coefficients low to high.

#include <string>
#include <vector>

#include "xpadic/approx.hpp"

namespace xpadic {

class ApproxPoly {
 public:
  ApproxPoly(ApproxRing ring, std::vector<ApproxElement> coeffs);

  const ApproxRing& ring() const { return ring_; }
  const std::vector<ApproxElement>& coeffs() const { return coeffs_; }
  const ApproxElement& coeff(std::size_t i) const { return coeffs_[i]; }
  /// Static degree bound: number of coefficients minus one.
  std::size_t degree() const { return coeffs_.size() - 1; }
  /// Index of the highest coefficient that is not weakly zero, or -1.
  long apparent_degree() const;
  /// Minimum absolute precision over the coefficients (kInfinity if all exact).
  std::int64_t absolute_precision() const;

  friend ApproxPoly operator+(const ApproxPoly& f, const ApproxPoly& g);
  friend ApproxPoly operator-(const ApproxPoly& f, const ApproxPoly& g);
  friend ApproxPoly operator*(const ApproxPoly& f, const ApproxPoly& g);
  ApproxPoly operator-() const;
  ApproxPoly scaled_by(const ApproxElement& c) const;

  ApproxPoly derivative() const;
  /// f(x + a).
  ApproxPoly shift(const ApproxElement& a) const;
  /// pi^j * f(pi^k * x).
  ApproxPoly scale(std::int64_t j, std::int64_t k) const;
  ApproxElement evaluate(const ApproxElement& a) const;
  /// Quotient and remainder by a polynomial whose leading coefficient is
  /// weakly equal to one.
  std::pair<ApproxPoly, ApproxPoly> divrem_monic(const ApproxPoly& g) const;
  ApproxPoly coerce_to(const ApproxRing& target) const;
  /// Keeps coefficients 0..n-1 (n >= 1).
  ApproxPoly truncated_degree(std::size_t n) const;

  std::string to_string() const;

 private:
  ApproxRing ring_;
  std::vector<ApproxElement> coeffs_;
};

/// Coefficientwise weak equality after padding the shorter polynomial with
/// precise zeros.
bool weakly_equal(const ApproxPoly& f, const ApproxPoly& g);

}  // namespace xpadic
