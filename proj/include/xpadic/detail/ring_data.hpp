#pragma once

// Internal representation of tower levels and arithmetic on Integral values.
// Every routine taking a precision N works in O / pi^N of the given level and
// returns canonical representatives; inputs may carry more digits than N.

#include <gmpxx.h>

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "xpadic/approx.hpp"

namespace xpadic::detail {

struct RingData {
  mpz_class p;
  std::int64_t cap = 0;
  bool field = true;
  std::uint64_t family = 0;
  int level = 0;

  // Extension steps only.
  std::shared_ptr<const RingData> base;
  ExtensionMode mode = ExtensionMode::unramified;
  std::int64_t degree = 1;
  std::vector<Integral> g;      // g[0..degree-1], monic leading term implicit
  std::int64_t g_precision = 0;  // base digits carried by g
  ApproxRing::Rebuild rebuild;

  std::int64_t e_total = 1;
  std::int64_t f_total = 1;
  mpz_class residue_size;  // p^f_total

  // pi_base = pi^e * theta, theta a unit known to theta_precision digits.
  Integral theta;
  std::int64_t theta_precision = kInfinity;
  // Eisenstein steps: kappa = pi_base / pi, known to cap - 1 digits.
  Integral kappa;
};

Integral zero(const RingData& r);
Integral one(const RingData& r);
/// The basis vector t^i of the top step (i < degree).
Integral basis(const RingData& r, std::int64_t i);
Integral from_mpz(const RingData& r, const mpz_class& n, std::int64_t prec);

Integral truncate(const RingData& r, const Integral& a, std::int64_t prec);
Integral add(const RingData& r, const Integral& a, const Integral& b, std::int64_t prec);
Integral sub(const RingData& r, const Integral& a, const Integral& b, std::int64_t prec);
Integral neg(const RingData& r, const Integral& a, std::int64_t prec);
Integral mul(const RingData& r, const Integral& a, const Integral& b, std::int64_t prec);
Integral pow(const RingData& r, const Integral& a, const mpz_class& n, std::int64_t prec);
/// Inverse of a unit modulo pi^prec.
Integral inverse(const RingData& r, const Integral& a, std::int64_t prec);

/// Valuation of a modulo pi^prec; returns prec when a is weakly zero.
std::int64_t valuation(const RingData& r, const Integral& a, std::int64_t prec);
bool is_zero(const RingData& r, const Integral& a, std::int64_t prec);

/// a / pi^s for a known modulo pi^prec with valuation >= s; the result is
/// known modulo pi^(prec - s).
Integral div_pi(const RingData& r, const Integral& a, std::int64_t s, std::int64_t prec);
/// a * pi^s modulo pi^out_prec.
Integral mul_pi(const RingData& r, const Integral& a, std::int64_t s, std::int64_t out_prec);

/// Embeds an integral of the immediate base (known to base_prec base digits).
Integral embed_base(const RingData& r, const Integral& a, std::int64_t base_prec,
                    std::int64_t prec);

/// Polynomial arithmetic over the residue field of a level; coefficient
/// lists are low-to-high and trimmed of trailing zeros.
using ResiduePoly = std::vector<Integral>;
bool residue_irreducible(const RingData& r, const ResiduePoly& f);

std::string residue_string(const RingData& r, const Integral& d);
std::string uniformizer_name(const RingData& r);
std::string generator_name(const RingData& r);

}  // namespace xpadic::detail
