#include <algorithm>
#include <cassert>

#include "xpadic/detail/ring_data.hpp"
#include "xpadic/errors.hpp"

namespace xpadic::detail {

namespace {

bool is_eisenstein(const RingData& r) { return r.level > 0 && r.mode == ExtensionMode::eisenstein; }

std::int64_t ceil_div_pos(std::int64_t a, std::int64_t b) {
  if (a <= 0) return 0;
  return (a + b - 1) / b;
}

// Base precision needed for coefficient i when the element is known mod pi^prec.
std::int64_t coeff_precision(const RingData& r, std::int64_t prec, std::int64_t i) {
  if (is_eisenstein(r)) return ceil_div_pos(prec - i, r.degree);
  return std::max<std::int64_t>(prec, 0);
}

// Base precision used for whole-element products.
std::int64_t work_precision(const RingData& r, std::int64_t prec) {
  if (is_eisenstein(r)) return ceil_div_pos(prec, r.degree);
  return std::max<std::int64_t>(prec, 0);
}

Integral single_div_pi_eisenstein(const RingData& r, const Integral& a, std::int64_t prec) {
  const RingData& b = *r.base;
  const std::int64_t e = r.degree;
  Integral shifted = zero(r);
  for (std::int64_t i = 1; i < e; ++i) shifted.c[i - 1] = a.c[i];
  const std::int64_t cp0 = coeff_precision(r, prec, 0);
  Integral d = div_pi(b, a.c[0], 1, cp0);
  Integral d_up = zero(r);
  d_up.c[0] = std::move(d);
  Integral dk = mul(r, d_up, r.kappa, prec - 1);
  return add(r, shifted, dk, prec - 1);
}

}  // namespace

Integral zero(const RingData& r) {
  Integral out;
  if (r.level > 0) out.c.assign(static_cast<std::size_t>(r.degree), zero(*r.base));
  return out;
}

Integral one(const RingData& r) {
  Integral out = zero(r);
  if (r.level == 0) {
    out.z = 1;
  } else {
    out.c[0] = one(*r.base);
  }
  return out;
}

Integral basis(const RingData& r, std::int64_t i) {
  if (r.level == 0) return one(r);
  Integral out = zero(r);
  out.c[static_cast<std::size_t>(i)] = one(*r.base);
  return out;
}

Integral from_mpz(const RingData& r, const mpz_class& n, std::int64_t prec) {
  if (r.level == 0) {
    Integral out;
    out.z = n;
    reduce_mod_prime_power(out.z, r.p, prec);
    return out;
  }
  Integral out = zero(r);
  out.c[0] = from_mpz(*r.base, n, coeff_precision(r, prec, 0));
  return out;
}

Integral truncate(const RingData& r, const Integral& a, std::int64_t prec) {
  if (r.level == 0) {
    Integral out;
    out.z = a.z;
    reduce_mod_prime_power(out.z, r.p, prec);
    return out;
  }
  Integral out;
  out.c.reserve(a.c.size());
  for (std::size_t i = 0; i < a.c.size(); ++i) {
    out.c.push_back(truncate(*r.base, a.c[i], coeff_precision(r, prec, static_cast<std::int64_t>(i))));
  }
  return out;
}

Integral add(const RingData& r, const Integral& a, const Integral& b, std::int64_t prec) {
  if (r.level == 0) {
    Integral out;
    out.z = a.z + b.z;
    reduce_mod_prime_power(out.z, r.p, prec);
    return out;
  }
  Integral out;
  out.c.reserve(a.c.size());
  for (std::size_t i = 0; i < a.c.size(); ++i) {
    out.c.push_back(add(*r.base, a.c[i], b.c[i], coeff_precision(r, prec, static_cast<std::int64_t>(i))));
  }
  return out;
}

Integral sub(const RingData& r, const Integral& a, const Integral& b, std::int64_t prec) {
  if (r.level == 0) {
    Integral out;
    out.z = a.z - b.z;
    reduce_mod_prime_power(out.z, r.p, prec);
    return out;
  }
  Integral out;
  out.c.reserve(a.c.size());
  for (std::size_t i = 0; i < a.c.size(); ++i) {
    out.c.push_back(sub(*r.base, a.c[i], b.c[i], coeff_precision(r, prec, static_cast<std::int64_t>(i))));
  }
  return out;
}

Integral neg(const RingData& r, const Integral& a, std::int64_t prec) {
  return sub(r, zero(r), a, prec);
}

Integral mul(const RingData& r, const Integral& a, const Integral& b, std::int64_t prec) {
  if (r.level == 0) {
    Integral out;
    out.z = a.z * b.z;
    reduce_mod_prime_power(out.z, r.p, prec);
    return out;
  }
  const RingData& base = *r.base;
  const std::int64_t d = r.degree;
  const std::int64_t m = work_precision(r, prec);
  std::vector<Integral> t(static_cast<std::size_t>(2 * d - 1), zero(base));
  for (std::int64_t i = 0; i < d; ++i) {
    if (is_zero(base, a.c[i], m)) continue;
    for (std::int64_t j = 0; j < d; ++j) {
      if (is_zero(base, b.c[j], m)) continue;
      t[i + j] = add(base, t[i + j], mul(base, a.c[i], b.c[j], m), m);
    }
  }
  // t^d = -(g_0 + ... + g_{d-1} t^{d-1})
  for (std::int64_t k = 2 * d - 2; k >= d; --k) {
    if (is_zero(base, t[k], m)) continue;
    for (std::int64_t i = 0; i < d; ++i) {
      t[k - d + i] = sub(base, t[k - d + i], mul(base, t[k], r.g[i], m), m);
    }
  }
  Integral out;
  out.c.assign(t.begin(), t.begin() + d);
  return truncate(r, out, prec);
}

Integral pow(const RingData& r, const Integral& a, const mpz_class& n, std::int64_t prec) {
  Integral result = truncate(r, one(r), prec);
  Integral square = truncate(r, a, prec);
  const std::size_t bits = mpz_sizeinbase(n.get_mpz_t(), 2);
  for (std::size_t i = 0; i < bits; ++i) {
    if (mpz_tstbit(n.get_mpz_t(), i)) result = mul(r, result, square, prec);
    if (i + 1 < bits) square = mul(r, square, square, prec);
  }
  return result;
}

Integral inverse(const RingData& r, const Integral& a, std::int64_t prec) {
  if (prec <= 0) return zero(r);
  if (r.level == 0) {
    Integral out;
    const mpz_class& modulus = prime_power(r.p, prec);
    if (mpz_invert(out.z.get_mpz_t(), a.z.get_mpz_t(), modulus.get_mpz_t()) == 0) {
      throw PrecisionError("inverse of a non-unit");
    }
    return out;
  }
  if (is_zero(r, a, 1)) throw PrecisionError("inverse of a non-unit");
  Integral y = pow(r, a, r.residue_size - 2, 1);
  const Integral two = from_mpz(r, 2, prec);
  std::int64_t cur = 1;
  while (cur < prec) {
    cur = std::min(2 * cur, prec);
    Integral t = sub(r, two, mul(r, a, y, cur), cur);
    y = mul(r, y, t, cur);
  }
  return truncate(r, y, prec);
}

std::int64_t valuation(const RingData& r, const Integral& a, std::int64_t prec) {
  if (prec <= 0) return 0;
  if (r.level == 0) {
    mpz_class z = a.z;
    reduce_mod_prime_power(z, r.p, prec);
    return std::min(xpadic::valuation(z, r.p), prec);
  }
  std::int64_t best = prec;
  for (std::int64_t i = 0; i < r.degree; ++i) {
    const std::int64_t cp = coeff_precision(r, prec, i);
    if (cp <= 0) continue;
    const std::int64_t vb = valuation(*r.base, a.c[i], cp);
    const std::int64_t v = is_eisenstein(r) ? r.degree * vb + i : vb;
    best = std::min(best, v);
  }
  return best;
}

bool is_zero(const RingData& r, const Integral& a, std::int64_t prec) {
  return valuation(r, a, prec) >= prec;
}

Integral div_pi(const RingData& r, const Integral& a, std::int64_t s, std::int64_t prec) {
  assert(s <= prec);
  Integral x = truncate(r, a, prec);
  if (s == 0) return x;
  if (r.level == 0) {
    mpz_divexact(x.z.get_mpz_t(), x.z.get_mpz_t(), prime_power(r.p, s).get_mpz_t());
    return x;
  }
  if (!is_eisenstein(r)) {
    for (auto& c : x.c) c = div_pi(*r.base, c, s, prec);
    return x;
  }
  const std::int64_t e = r.degree;
  const std::int64_t q = s / e;
  const std::int64_t rem = s % e;
  if (q > 0) {
    for (std::int64_t i = 0; i < e; ++i) {
      const std::int64_t cp = coeff_precision(r, prec, i);
      x.c[i] = cp <= q ? zero(*r.base) : div_pi(*r.base, x.c[i], q, cp);
    }
    prec -= e * q;
  }
  for (std::int64_t i = 0; i < rem; ++i) {
    x = single_div_pi_eisenstein(r, x, prec);
    --prec;
  }
  return x;
}

Integral mul_pi(const RingData& r, const Integral& a, std::int64_t s, std::int64_t out_prec) {
  if (s >= out_prec) return zero(r);
  if (r.level == 0) {
    Integral out;
    out.z = a.z * prime_power(r.p, s);
    reduce_mod_prime_power(out.z, r.p, out_prec);
    return out;
  }
  if (!is_eisenstein(r)) {
    Integral out;
    for (const auto& c : a.c) out.c.push_back(mul_pi(*r.base, c, s, out_prec));
    return out;
  }
  const std::int64_t e = r.degree;
  const std::int64_t q = s / e;
  const std::int64_t rem = s % e;
  Integral out;
  for (std::int64_t i = 0; i < e; ++i) {
    out.c.push_back(mul_pi(*r.base, a.c[i], q, coeff_precision(r, out_prec, i)));
  }
  if (rem > 0) out = mul(r, out, basis(r, rem), out_prec);
  return out;
}

Integral embed_base(const RingData& r, const Integral& a, std::int64_t base_prec,
                    std::int64_t prec) {
  Integral out = zero(r);
  const std::int64_t scale = is_eisenstein(r) ? r.degree : 1;
  const std::int64_t known = base_prec >= kInfinity / scale ? kInfinity : base_prec * scale;
  out.c[0] = a;
  return truncate(r, out, std::min(known, prec));
}

namespace {

// Residue-field helpers (precision 1).
void trim(ResiduePoly& f, const RingData& r) {
  while (!f.empty() && is_zero(r, f.back(), 1)) f.pop_back();
}

ResiduePoly poly_sub(const RingData& r, const ResiduePoly& a, const ResiduePoly& b) {
  ResiduePoly out(std::max(a.size(), b.size()), zero(r));
  for (std::size_t i = 0; i < out.size(); ++i) {
    const Integral& x = i < a.size() ? a[i] : out[i];
    const Integral& y = i < b.size() ? b[i] : zero(r);
    out[i] = sub(r, x, y, 1);
  }
  trim(out, r);
  return out;
}

ResiduePoly poly_rem(const RingData& r, ResiduePoly a, const ResiduePoly& m) {
  trim(a, r);
  const Integral lead_inv = inverse(r, m.back(), 1);
  while (a.size() >= m.size()) {
    const Integral factor = mul(r, a.back(), lead_inv, 1);
    const std::size_t shift = a.size() - m.size();
    for (std::size_t i = 0; i < m.size(); ++i) {
      a[shift + i] = sub(r, a[shift + i], mul(r, factor, m[i], 1), 1);
    }
    trim(a, r);
  }
  return a;
}

ResiduePoly poly_mulmod(const RingData& r, const ResiduePoly& a, const ResiduePoly& b,
                        const ResiduePoly& m) {
  if (a.empty() || b.empty()) return {};
  ResiduePoly out(a.size() + b.size() - 1, zero(r));
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      out[i + j] = add(r, out[i + j], mul(r, a[i], b[j], 1), 1);
    }
  }
  return poly_rem(r, std::move(out), m);
}

ResiduePoly poly_powmod(const RingData& r, const ResiduePoly& a, const mpz_class& n,
                        const ResiduePoly& m) {
  ResiduePoly result{one(r)};
  ResiduePoly square = poly_rem(r, a, m);
  const std::size_t bits = mpz_sizeinbase(n.get_mpz_t(), 2);
  for (std::size_t i = 0; i < bits; ++i) {
    if (mpz_tstbit(n.get_mpz_t(), i)) result = poly_mulmod(r, result, square, m);
    square = poly_mulmod(r, square, square, m);
  }
  return result;
}

ResiduePoly poly_gcd(const RingData& r, ResiduePoly a, ResiduePoly b) {
  trim(a, r);
  trim(b, r);
  while (!b.empty()) {
    ResiduePoly t = poly_rem(r, std::move(a), b);
    a = std::move(b);
    b = std::move(t);
  }
  return a;
}

}  // namespace

bool residue_irreducible(const RingData& r, const ResiduePoly& f_in) {
  ResiduePoly f = f_in;
  trim(f, r);
  const std::size_t d = f.empty() ? 0 : f.size() - 1;
  if (d == 0) return false;
  if (d == 1) return true;
  const ResiduePoly x{zero(r), one(r)};
  ResiduePoly h = x;
  for (std::size_t i = 1; i <= d / 2; ++i) {
    h = poly_powmod(r, h, r.residue_size, f);
    ResiduePoly g = poly_gcd(r, f, poly_sub(r, h, x));
    if (g.size() > 1) return false;
  }
  return true;
}

std::string generator_name(const RingData& r) {
  if (r.level == 0) return r.p.get_str();
  std::string name = r.mode == ExtensionMode::eisenstein ? "pi" : "a";
  if (r.level > 1) name += std::to_string(r.level);
  return name;
}

std::string uniformizer_name(const RingData& r) {
  if (r.level == 0) return r.p.get_str();
  if (r.mode == ExtensionMode::eisenstein) return generator_name(r);
  return uniformizer_name(*r.base);
}

std::string residue_string(const RingData& r, const Integral& d) {
  if (r.level == 0) {
    mpz_class z = d.z;
    reduce_mod_prime_power(z, r.p, 1);
    return z.get_str();
  }
  if (r.mode == ExtensionMode::eisenstein) return residue_string(*r.base, d.c[0]);
  std::string out;
  const std::string gen = generator_name(r);
  for (std::int64_t i = 0; i < r.degree; ++i) {
    if (is_zero(*r.base, d.c[i], 1)) continue;
    std::string coeff = residue_string(*r.base, d.c[i]);
    std::string term;
    const std::string power = i == 1 ? gen : gen + "^" + std::to_string(i);
    if (i == 0) {
      term = coeff;
    } else if (coeff == "1") {
      term = power;
    } else if (coeff.find(' ') != std::string::npos) {
      term = "(" + coeff + ")*" + power;
    } else {
      term = coeff + "*" + power;
    }
    if (!out.empty()) out += " + ";
    out += term;
  }
  return out.empty() ? "0" : out;
}

}  // namespace xpadic::detail
