#pragma once

// Exact invariants of the double Kodaira fibration attached to a structure of type (b, n)
// on a group of order |G| whose halves K_1, K_2 have index m_1, m_2. With f = 1 - 1/n:
//
//   c1^2 = |G| (2b-2) (4b-4 + 4f - f^2)        c2 = |G| (2b-2) (2b-2 + f)
//   slope = c1^2 / c2 = 2 + (2f - f^2) / (2b-2 + f)
//   sigma = (c1^2 - 2 c2) / 3
//   b_i - 1 = m_i (b-1)                        2 g_i - 2 = (|G| / m_i) (2b-2 + f)
//
// Everything is computed with big integers and normalized rationals; nothing here touches
// floating point.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "dks/bigint.hpp"
#include "dks/error.hpp"
#include "dks/kodaira.hpp"
#include "dks/zpfield.hpp"

namespace dks {

struct FibrationData {
  BigInt group_order;
  std::uint64_t b = 0;
  std::uint64_t n = 0;
  BigInt m1 = 1, m2 = 1;
};

struct SurfaceInvariants {
  BigInt c1sq, c2, sigma;
  BigRational slope;
  BigInt b1, b2, g1, g2;
  BigRational frak_n;  // 1 - 1/n
};

struct InvariantOptions {
  /// Accept n = 1 (f = 0) for exercising the formulas; such data has no geometric meaning.
  bool allow_formal_n1 = false;
};

namespace detail {

inline BigInt require_integer(const BigRational& q, const std::string& what) {
  if (boost::multiprecision::denominator(q) != 1)
    throw Error(Errc::inconsistent_data, what + " = " + to_string(q) + " is not an integer");
  return boost::multiprecision::numerator(q);
}

}  // namespace detail

inline SurfaceInvariants compute_invariants(const FibrationData& d, InvariantOptions opts = {}) {
  if (d.b < 2) throw Error(Errc::invalid_argument, "b must be at least 2");
  if (d.n == 0 || (d.n == 1 && !opts.allow_formal_n1))
    throw Error(Errc::invalid_argument, "n must be at least 2");
  if (d.group_order <= 0) throw Error(Errc::invalid_argument, "group order must be positive");
  for (const auto* m : {&d.m1, &d.m2}) {
    if (*m <= 0 || d.group_order % *m != 0)
      throw Error(Errc::inconsistent_data, "index " + m->str() + " does not divide |G| = " + d.group_order.str());
  }

  const BigRational f = BigRational(1) - BigRational(BigInt(1), BigInt(d.n));
  const BigRational G(d.group_order);
  const BigRational two_b_minus_2(BigInt(2 * d.b - 2));
  const BigRational four_b_minus_4(BigInt(4 * d.b - 4));

  SurfaceInvariants out;
  out.frak_n = f;
  const BigRational c1sq = G * two_b_minus_2 * (four_b_minus_4 + 4 * f - f * f);
  const BigRational c2 = G * two_b_minus_2 * (two_b_minus_2 + f);
  out.c1sq = detail::require_integer(c1sq, "c1^2");
  out.c2 = detail::require_integer(c2, "c2");
  out.slope = c1sq / c2;
  out.sigma = detail::require_integer((c1sq - 2 * c2) / 3, "signature");

  out.b1 = d.m1 * (d.b - 1) + 1;
  out.b2 = d.m2 * (d.b - 1) + 1;
  const auto genus = [&](const BigInt& m, const char* name) {
    const BigRational two_g_minus_2 = BigRational(d.group_order / m) * (two_b_minus_2 + f);
    const BigInt twice = detail::require_integer(two_g_minus_2, std::string("2") + name + " - 2");
    if (twice % 2 != 0)
      throw Error(Errc::inconsistent_data, std::string(name) + " is not an integer (2g-2 = " + twice.str() + ")");
    return BigInt(twice / 2 + 1);
  };
  out.g1 = genus(d.m1, "g1");
  out.g2 = genus(d.m2, "g2");
  return out;
}

// ---------------------------------------------------------------------------

inline std::vector<std::uint64_t> primes_in_range(std::uint64_t lo, std::uint64_t hi) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t q = std::max<std::uint64_t>(lo, 2); q <= hi; ++q)
    if (is_prime(q)) out.push_back(q);
  return out;
}

struct SlopeRow {
  std::uint64_t p = 0;
  BigRational slope;
  BigInt sigma;
  BigRational excess;  // slope - limit
};

struct SlopeTable {
  std::uint64_t b = 0;
  BigRational limit;  // 2 + 1/(2b-1), the p -> infinity value
  std::vector<SlopeRow> rows;
  bool strictly_decreasing_from_7 = false;  // over the rows with p >= 7
  bool above_limit = false;                 // every row exceeds the limit
};

/// Non-strong family: |G| = p^{4b+1}, n = p, m_1 = m_2 = p^{2b}.
inline SlopeTable slope_table(std::uint64_t b, const std::vector<std::uint64_t>& primes) {
  SlopeTable t;
  t.b = b;
  t.limit = BigRational(2) + BigRational(BigInt(1), BigInt(2 * b - 1));
  for (auto p : primes) {
    if (!is_prime(p)) throw Error(Errc::invalid_argument, std::to_string(p) + " is not prime");
    const BigInt bp(p);
    const auto inv = compute_invariants({ipow(bp, 4 * b + 1), b, p, ipow(bp, 2 * b), ipow(bp, 2 * b)});
    t.rows.push_back({p, inv.slope, inv.sigma, inv.slope - t.limit});
  }
  t.strictly_decreasing_from_7 = true;
  const SlopeRow* prev = nullptr;
  for (const auto& r : t.rows) {
    if (r.p < 7) continue;
    if (prev && !(r.slope < prev->slope)) t.strictly_decreasing_from_7 = false;
    prev = &r;
  }
  t.above_limit = std::all_of(t.rows.begin(), t.rows.end(), [](const SlopeRow& r) { return r.excess > 0; });
  return t;
}

// ---------------------------------------------------------------------------
// Which slopes 2 + s can come from a structure of type (b, n)?
// s = (2f - f^2)/(2b-2+f) is equivalent to (2bs - s - 1) n^2 - s n + 1 = 0.

struct FeasibilityVerdict {
  std::uint64_t b = 0;
  BigRational s;
  bool feasible = false;
  std::vector<std::uint64_t> admissible_n;
  BigRational discriminant;  // (s+2)^2 - 8bs
  bool discriminant_is_square = false;
  BigRational quad_a, quad_b, quad_c;
  bool below_bound = false;  // s < 6 - 4 sqrt(2), tested as (s-6)^2 > 32 and s < 1
};

inline bool is_rational_square(const BigRational& q, BigRational& root) {
  if (q < 0) return false;
  BigInt rn, rd;
  if (!is_perfect_square(boost::multiprecision::numerator(q), rn)) return false;
  if (!is_perfect_square(boost::multiprecision::denominator(q), rd)) return false;
  root = BigRational(rn, rd);
  return true;
}

inline bool below_slope_bound(const BigRational& s) { return (s - 6) * (s - 6) > 32 && s < 1; }

inline FeasibilityVerdict feasibility_check(std::uint64_t b, const BigRational& s) {
  if (s <= 0) throw Error(Errc::invalid_argument, "s must be positive");
  if (b < 1) throw Error(Errc::invalid_argument, "b must be positive");
  FeasibilityVerdict v;
  v.b = b;
  v.s = s;
  const BigRational bq{BigInt(b)};
  v.quad_a = 2 * bq * s - s - 1;
  v.quad_b = -s;
  v.quad_c = 1;
  v.discriminant = (s + 2) * (s + 2) - 8 * bq * s;
  v.below_bound = below_slope_bound(s);

  BigRational root;
  v.discriminant_is_square = is_rational_square(v.discriminant, root);
  if (!v.discriminant_is_square) return v;

  std::vector<BigRational> candidates;
  if (v.quad_a == 0) {
    candidates.push_back(BigRational(1) / s);
  } else {
    candidates.push_back((s + root) / (2 * v.quad_a));
    candidates.push_back((s - root) / (2 * v.quad_a));
  }
  for (const auto& c : candidates) {
    if (boost::multiprecision::denominator(c) != 1 || c < 2) continue;
    const auto n = static_cast<std::uint64_t>(boost::multiprecision::numerator(c));
    if (std::find(v.admissible_n.begin(), v.admissible_n.end(), n) == v.admissible_n.end())
      v.admissible_n.push_back(n);
  }
  std::sort(v.admissible_n.begin(), v.admissible_n.end());
  v.feasible = !v.admissible_n.empty();
  return v;
}

/// All feasible (b, s) with s = u/v in lowest terms, 0 < s < 1, v <= denominator_max and
/// 2 <= b <= b_max, sorted by (b, s).
inline std::vector<FeasibilityVerdict> feasibility_scan(std::uint64_t b_max, std::uint64_t denominator_max) {
  if (b_max < 1 || denominator_max < 1) throw Error(Errc::invalid_argument, "scan bounds must be positive");
  std::vector<FeasibilityVerdict> out;
  for (std::uint64_t b = 2; b <= b_max; ++b) {
    std::vector<FeasibilityVerdict> row;
    for (std::uint64_t den = 2; den <= denominator_max; ++den) {
      for (std::uint64_t num = 1; num < den; ++num) {
        if (std::gcd(num, den) != 1) continue;
        auto v = feasibility_check(b, BigRational(BigInt(num), BigInt(den)));
        if (v.feasible) row.push_back(std::move(v));
      }
    }
    std::sort(row.begin(), row.end(), [](const auto& x, const auto& y) { return x.s < y.s; });
    for (auto& v : row) out.push_back(std::move(v));
  }
  return out;
}

// ---------------------------------------------------------------------------

/// Number of distinct prime factors, by trial division.
inline unsigned omega_prime_factors(std::uint64_t m) {
  if (m == 0) throw Error(Errc::invalid_argument, "omega is undefined for 0");
  unsigned count = 0;
  if (m % 2 == 0) {
    ++count;
    while (m % 2 == 0) m /= 2;
  }
  for (std::uint64_t d = 3; d <= m / d; d += 2) {
    if (m % d != 0) continue;
    ++count;
    while (m % d == 0) m /= d;
  }
  if (m > 1) ++count;
  return count;
}

inline std::vector<std::uint64_t> distinct_prime_factors(std::uint64_t m) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 2; d <= m / d; ++d) {
    if (m % d != 0) continue;
    out.push_back(d);
    while (m % d == 0) m /= d;
  }
  if (m > 1) out.push_back(m);
  return out;
}

struct KappaRow {
  std::uint64_t b = 0;
  unsigned omega = 0;                   // omega(b+1)
  std::vector<std::uint64_t> primes;    // p | b+1, ascending
  std::vector<BigInt> signatures;       // strong structure on order p^{2b+1}, n = p
  bool signatures_distinct = false;
  std::optional<bool> structures_verified;
};

/// One strong structure per prime divisor p of b+1; distinct signatures tell the resulting
/// surfaces apart. With `verify_structures`, each structure is built and checked.
inline std::vector<KappaRow> kappa_lower_bound_table(std::uint64_t b_min, std::uint64_t b_max,
                                                     bool verify_structures = false) {
  if (b_min < 2) throw Error(Errc::invalid_argument, "b must be at least 2");
  std::vector<KappaRow> rows;
  for (std::uint64_t b = b_min; b <= b_max; ++b) {
    KappaRow row;
    row.b = b;
    row.omega = omega_prime_factors(b + 1);
    row.primes = distinct_prime_factors(b + 1);
    for (auto p : row.primes) {
      const auto inv = compute_invariants({ipow(BigInt(p), 2 * b + 1), b, p, 1, 1});
      row.signatures.push_back(inv.sigma);
    }
    auto sorted = row.signatures;
    std::sort(sorted.begin(), sorted.end());
    row.signatures_distinct = std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
    if (verify_structures) {
      bool ok = true;
      for (auto p : row.primes) {
        const auto rep = verify_full(construct_strong(b, static_cast<std::int64_t>(p), Variant::H));
        ok = ok && rep.passed && rep.strength == Strength::strong;
      }
      row.structures_verified = ok;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace dks
