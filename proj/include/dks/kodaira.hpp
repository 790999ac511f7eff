#pragma once

// Diagonal double Kodaira structures: a generating (4b+1)-tuple
//
//   r_11, t_11, ..., r_1b, t_1b,  r_21, t_21, ..., r_2b, t_2b,  z
//
// of a finite group with o(z) = n, subject to the surface relations and the conjugacy
// actions of r_1j and t_1j on the second half of the tuple.
//
// Relation identifiers reported in violations:
//
//   full mode      surface.1  surface.2
//                  r1j.r2k.lt r1j.r2j.eq r1j.r2k.gt  r1j.t2k.lt r1j.t2j.eq r1j.t2k.gt  r1j.z
//                  t1j.r2k.lt t1j.r2j.eq t1j.r2k.gt  t1j.t2k.lt t1j.t2j.eq t1j.t2k.gt  t1j.z
//   class-2 mode   central.r1j central.t1j central.r2j central.t2j
//                  surface.1 surface.2  r1j.r2k  r1j.t2k  t1j.r2k  t1j.t2k
//
// ".lt", ".eq", ".gt" compare j with k. The indices j, k are 1-based in reports (0 when
// unused). The order of z and generation are reported as separate fields, not violations.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dks/bigint.hpp"
#include "dks/error.hpp"
#include "dks/pcgroup.hpp"
#include "dks/zpfield.hpp"

namespace dks {

struct KodairaStructure {
  GroupDescriptor descriptor;
  std::size_t b = 0;
  std::uint64_t n = 0;
  std::vector<GroupElement> r1, t1, r2, t2;
  GroupElement z;

  /// The 4b tuple elements in the order r_11, t_11, ..., r_1b, t_1b, r_21, ..., t_2b.
  std::vector<GroupElement> tuple() const {
    std::vector<GroupElement> out;
    out.reserve(4 * b);
    for (std::size_t j = 0; j < b; ++j) {
      out.push_back(r1[j]);
      out.push_back(t1[j]);
    }
    for (std::size_t j = 0; j < b; ++j) {
      out.push_back(r2[j]);
      out.push_back(t2[j]);
    }
    return out;
  }

  std::vector<GroupElement> generators() const {
    auto out = tuple();
    out.push_back(z);
    return out;
  }

  std::vector<GroupElement> first_half() const {
    std::vector<GroupElement> out;
    for (std::size_t j = 0; j < b; ++j) {
      out.push_back(r1[j]);
      out.push_back(t1[j]);
    }
    out.push_back(z);
    return out;
  }

  std::vector<GroupElement> second_half() const {
    std::vector<GroupElement> out;
    for (std::size_t j = 0; j < b; ++j) {
      out.push_back(r2[j]);
      out.push_back(t2[j]);
    }
    out.push_back(z);
    return out;
  }

  void validate_shape() const {
    if (b < 2) throw Error(Errc::invalid_argument, "structure genus b must be at least 2");
    if (n < 2) throw Error(Errc::invalid_argument, "structure order n must be at least 2");
    if (r1.size() != b || t1.size() != b || r2.size() != b || t2.size() != b)
      throw Error(Errc::dimension_mismatch, "each of r1, t1, r2, t2 must hold b elements");
    for (const auto& g : generators()) descriptor.require(g);
  }

  friend bool operator==(const KodairaStructure&, const KodairaStructure&) = default;
};

enum class Strength { strong, non_strong, unknown };
enum class VerifyMode { full, class2 };

/// How K_1 and K_2 are measured. `shortcut` uses the linear-span formula (always available
/// for these descriptors); `enumerate` runs the capped breadth-first closure and reports
/// unknown strength when the cap is hit.
enum class SubgroupOrderMethod { shortcut, enumerate };

inline std::string to_string(Strength s) {
  switch (s) {
    case Strength::strong: return "Strong";
    case Strength::non_strong: return "NonStrong";
    case Strength::unknown: return "Unknown";
  }
  return "Unknown";
}

inline std::string to_string(VerifyMode m) { return m == VerifyMode::full ? "full" : "class2"; }

struct Violation {
  std::string relation;
  std::size_t j = 0, k = 0;
  GroupElement lhs, rhs;

  friend bool operator==(const Violation&, const Violation&) = default;
};

struct VerificationReport {
  VerifyMode mode = VerifyMode::full;
  bool passed = false;
  std::vector<Violation> violations;
  std::uint64_t z_order = 0;
  bool z_order_ok = false;
  bool generates = false;
  Strength strength = Strength::unknown;
  std::optional<BigInt> k1_order, k2_order;
  BigInt group_order;

  bool has_violation(std::string_view relation) const {
    for (const auto& v : violations)
      if (v.relation == relation) return true;
    return false;
  }
};

struct VerifyOptions {
  SubgroupOrderMethod subgroup_orders = SubgroupOrderMethod::shortcut;
  std::uint64_t cap = default_closure_cap;
};

namespace detail {

class RelationChecker {
 public:
  explicit RelationChecker(const KodairaStructure& s) : d_(s.descriptor) {}

  GroupElement mul(std::initializer_list<GroupElement> xs) const {
    GroupElement acc = d_.identity();
    for (const auto& x : xs) acc = d_.multiply(acc, x);
    return acc;
  }
  GroupElement inv(const GroupElement& g) const { return d_.inverse(g); }
  GroupElement comm(const GroupElement& g, const GroupElement& h) const { return d_.commutator(g, h); }
  GroupElement one() const { return d_.identity(); }

  void expect(std::string relation, std::size_t j, std::size_t k, GroupElement lhs, GroupElement rhs) {
    if (lhs != rhs) violations_.push_back({std::move(relation), j, k, std::move(lhs), std::move(rhs)});
  }

  std::vector<Violation> take() { return std::move(violations_); }

 private:
  const GroupDescriptor& d_;
  std::vector<Violation> violations_;
};

inline std::optional<BigInt> subgroup_order(const GroupDescriptor& d, std::span<const GroupElement> gens,
                                            const VerifyOptions& opts) {
  if (opts.subgroup_orders == SubgroupOrderMethod::shortcut) return span_shortcut(d, gens).order;
  const auto res = subgroup_closure(d, gens, opts.cap);
  if (!res.complete) return std::nullopt;
  return BigInt(res.enumerated);
}

inline void fill_common(const KodairaStructure& s, VerificationReport& rep, const VerifyOptions& opts) {
  const auto& d = s.descriptor;
  rep.group_order = d.order();
  rep.z_order = d.element_order(s.z);
  rep.z_order_ok = rep.z_order == s.n;
  const auto gens = s.generators();
  rep.generates = span_shortcut(d, gens).order == rep.group_order;

  const auto k1 = s.first_half();
  const auto k2 = s.second_half();
  rep.k1_order = subgroup_order(d, k1, opts);
  rep.k2_order = subgroup_order(d, k2, opts);
  const auto is_whole = [&](const std::optional<BigInt>& o) { return o && *o == rep.group_order; };
  const auto is_proper = [&](const std::optional<BigInt>& o) { return o && *o != rep.group_order; };
  if (is_whole(rep.k1_order) && is_whole(rep.k2_order)) rep.strength = Strength::strong;
  else if (is_proper(rep.k1_order) || is_proper(rep.k2_order)) rep.strength = Strength::non_strong;
  else rep.strength = Strength::unknown;

  rep.passed = rep.violations.empty() && rep.generates && rep.z_order_ok;
}

}  // namespace detail

/// Evaluates every defining relation in its general form by literal group arithmetic.
inline VerificationReport verify_full(const KodairaStructure& s, const VerifyOptions& opts = {}) {
  s.validate_shape();
  detail::RelationChecker c(s);
  const std::size_t b = s.b;
  const auto& z = s.z;
  const auto zi = c.inv(z);

  {
    // [r_1b^-1, t_1b^-1] t_1b^-1 ... [r_11^-1, t_11^-1] t_11^-1 (t_11 t_12 ... t_1b) = z
    GroupElement lhs = c.one();
    for (std::size_t j = b; j-- > 0;)
      lhs = c.mul({lhs, c.comm(c.inv(s.r1[j]), c.inv(s.t1[j])), c.inv(s.t1[j])});
    for (std::size_t j = 0; j < b; ++j) lhs = c.mul({lhs, s.t1[j]});
    c.expect("surface.1", 0, 0, lhs, z);
  }
  {
    // [r_21^-1, t_21] t_21 ... [r_2b^-1, t_2b] t_2b (t_2b^-1 ... t_21^-1) = z^-1
    GroupElement lhs = c.one();
    for (std::size_t j = 0; j < b; ++j) lhs = c.mul({lhs, c.comm(c.inv(s.r2[j]), s.t2[j]), s.t2[j]});
    for (std::size_t j = b; j-- > 0;) lhs = c.mul({lhs, c.inv(s.t2[j])});
    c.expect("surface.2", 0, 0, lhs, zi);
  }

  for (std::size_t j = 0; j < b; ++j) {
    const auto& r1j = s.r1[j];
    const auto& t1j = s.t1[j];
    const auto& r2j = s.r2[j];
    const auto& t2j = s.t2[j];
    const auto r2ji = c.inv(r2j);
    const auto t2ji = c.inv(t2j);
    const std::size_t J = j + 1;

    for (std::size_t k = 0; k < b; ++k) {
      const auto& r2k = s.r2[k];
      const auto& t2k = s.t2[k];
      const std::size_t K = k + 1;
      const auto a = c.comm(r1j, r2k);
      const auto bb = c.comm(r1j, t2k);
      const auto cc = c.comm(t1j, r2k);
      const auto dd = c.comm(t1j, t2k);
      if (j < k) {
        c.expect("r1j.r2k.lt", J, K, a, c.one());
        c.expect("r1j.t2k.lt", J, K, bb, c.one());
        c.expect("t1j.r2k.lt", J, K, cc, c.one());
        c.expect("t1j.t2k.lt", J, K, dd, c.one());
      } else if (j == k) {
        c.expect("r1j.r2j.eq", J, K, a, c.one());
        c.expect("r1j.t2j.eq", J, K, bb, zi);
        c.expect("t1j.r2j.eq", J, K, cc, c.mul({t2ji, z, t2j}));
        c.expect("t1j.t2j.eq", J, K, dd, c.comm(t2ji, z));
      } else {
        const auto t2ki = c.inv(t2k);
        c.expect("r1j.r2k.gt", J, K, a, c.mul({zi, r2k, r2ji, z, r2j, c.inv(r2k)}));
        c.expect("r1j.t2k.gt", J, K, bb, c.comm(zi, t2k));
        c.expect("t1j.r2k.gt", J, K, cc, c.comm(t2ji, z));
        c.expect("t1j.t2k.gt", J, K, dd, c.mul({t2ji, z, t2j, zi, t2k, z, t2ji, zi, t2j, t2ki}));
      }
    }
    c.expect("r1j.z", J, 0, c.comm(r1j, z), c.comm(r2ji, z));
    c.expect("t1j.z", J, 0, c.comm(t1j, z), c.comm(t2ji, z));
  }

  VerificationReport rep;
  rep.mode = VerifyMode::full;
  rep.violations = c.take();
  detail::fill_common(s, rep, opts);
  return rep;
}

/// Evaluates the simplified relation set valid when all commutators are central.
inline VerificationReport verify_class2(const KodairaStructure& s, const VerifyOptions& opts = {}) {
  s.validate_shape();
  detail::RelationChecker c(s);
  const std::size_t b = s.b;
  const auto& z = s.z;
  const auto zi = c.inv(z);

  for (std::size_t j = 0; j < b; ++j) {
    c.expect("central.r1j", j + 1, 0, c.comm(s.r1[j], z), c.one());
    c.expect("central.t1j", j + 1, 0, c.comm(s.t1[j], z), c.one());
    c.expect("central.r2j", j + 1, 0, c.comm(s.r2[j], z), c.one());
    c.expect("central.t2j", j + 1, 0, c.comm(s.t2[j], z), c.one());
  }

  {
    GroupElement lhs = c.one();
    for (std::size_t j = b; j-- > 0;) lhs = c.mul({lhs, c.comm(c.inv(s.r1[j]), c.inv(s.t1[j]))});
    c.expect("surface.1", 0, 0, lhs, z);
  }
  {
    GroupElement lhs = c.one();
    for (std::size_t j = 0; j < b; ++j) lhs = c.mul({lhs, c.comm(c.inv(s.r2[j]), s.t2[j])});
    c.expect("surface.2", 0, 0, lhs, zi);
  }

  for (std::size_t j = 0; j < b; ++j) {
    for (std::size_t k = 0; k < b; ++k) {
      const bool diag = j == k;
      c.expect("r1j.r2k", j + 1, k + 1, c.comm(s.r1[j], s.r2[k]), c.one());
      c.expect("r1j.t2k", j + 1, k + 1, c.comm(s.r1[j], s.t2[k]), diag ? zi : c.one());
      c.expect("t1j.r2k", j + 1, k + 1, c.comm(s.t1[j], s.r2[k]), diag ? z : c.one());
      c.expect("t1j.t2k", j + 1, k + 1, c.comm(s.t1[j], s.t2[k]), c.one());
    }
  }

  VerificationReport rep;
  rep.mode = VerifyMode::class2;
  rep.violations = c.take();
  detail::fill_common(s, rep, opts);
  return rep;
}

inline VerificationReport verify(const KodairaStructure& s, VerifyMode mode, const VerifyOptions& opts = {}) {
  return mode == VerifyMode::full ? verify_full(s, opts) : verify_class2(s, opts);
}

/// z <-> z^-1,  t_1j <-> t_{2,b+1-j}^-1,  r_1j <-> r_{2,b+1-j}.
inline KodairaStructure involution_dual(const KodairaStructure& s) {
  s.validate_shape();
  const auto& d = s.descriptor;
  KodairaStructure out{d, s.b, s.n, {}, {}, {}, {}, d.inverse(s.z)};
  out.r1.resize(s.b, d.identity());
  out.t1 = out.r2 = out.t2 = out.r1;
  for (std::size_t j = 0; j < s.b; ++j) {
    const std::size_t m = s.b - 1 - j;
    out.r1[j] = s.r2[m];
    out.r2[j] = s.r1[m];
    out.t1[j] = d.inverse(s.t2[m]);
    out.t2[j] = d.inverse(s.t1[m]);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Constructions

/// Requires p | b+1. Takes r_1j = r_2j = r_j and t_1j = t_2j = t_j in H_{2b+1}(Z_p) or
/// G_{2b+1}(Z_p); the surface relations then hold because b = -1 in Z_p.
inline KodairaStructure construct_strong(std::size_t b, std::int64_t p, Variant variant) {
  if (b < 2) throw Error(Errc::invalid_argument, "b must be at least 2");
  const PrimeField field(p);
  if ((b + 1) % field.modulus() != 0)
    throw Error(Errc::invalid_argument,
                "strong construction needs p | b+1 (b=" + std::to_string(b) + ", p=" + std::to_string(p) + ")");
  auto d = GroupDescriptor::extra_special(b, p, variant);
  KodairaStructure s{d, b, field.modulus(), {}, {}, {}, {}, d.central()};
  for (std::size_t j = 0; j < b; ++j) {
    s.r1.push_back(d.generator(2 * j));
    s.t1.push_back(d.generator(2 * j + 1));
  }
  s.r2 = s.r1;
  s.t2 = s.t1;
  return s;
}

struct LambdaMuChoice {
  FieldVector lambda, mu;

  friend bool operator==(const LambdaMuChoice&, const LambdaMuChoice&) = default;
};

/// Nonzero entries, sum(lambda) = sum(mu) = 1 and lambda_j mu_j != 1 for every j.
inline bool is_valid_choice(const LambdaMuChoice& c) {
  if (c.lambda.size() != c.mu.size() || c.lambda.modulus() != c.mu.modulus() || c.lambda.size() == 0)
    return false;
  const PrimeField f = c.lambda.field();
  FieldElement sl(f, 0), sm(f, 0), one(f, 1);
  for (std::size_t j = 0; j < c.lambda.size(); ++j) {
    if (c.lambda[j].is_zero() || c.mu[j].is_zero()) return false;
    if (c.lambda[j] * c.mu[j] == one) return false;
    sl += c.lambda[j];
    sm += c.mu[j];
  }
  return sl == one && sm == one;
}

enum class SelectMode { first, enumerate_all };

/// Bound on p^{2b} for exhaustive enumeration.
inline constexpr std::uint64_t lambda_mu_enumeration_limit = 1'000'000;

namespace detail {

// Free choices in ascending residue order: lambda_1..lambda_{b-1}, mu_1..mu_{b-2}, then
// mu_{b-1}; lambda_b and mu_b are forced by the sum conditions.
class FirstChoiceSearch {
 public:
  FirstChoiceSearch(std::size_t b, residue_t p) : b_(b), p_(p), lam_(b, 0), mu_(b, 0) {}

  bool run() { return assign_lambda(0); }
  std::vector<residue_t> lambda() const { return lam_; }
  std::vector<residue_t> mu() const { return mu_; }

 private:
  bool assign_lambda(std::size_t j) {
    if (j == b_ - 1) {
      std::uint64_t sum = 0;
      for (std::size_t i = 0; i + 1 < b_; ++i) sum += lam_[i];
      lam_[b_ - 1] = sub_mod(1, static_cast<residue_t>(sum % p_), p_);
      if (lam_[b_ - 1] == 0) return false;
      return assign_mu(0);
    }
    for (residue_t v = 1; v < p_; ++v) {
      lam_[j] = v;
      if (assign_lambda(j + 1)) return true;
    }
    return false;
  }

  bool assign_mu(std::size_t j) {
    if (j + 2 == b_) return assign_last_pair();
    for (residue_t v = 1; v < p_; ++v) {
      if (mul_mod(lam_[j], v, p_) == 1) continue;
      mu_[j] = v;
      if (assign_mu(j + 1)) return true;
    }
    return false;
  }

  bool assign_last_pair() {
    std::uint64_t sum = 0;
    for (std::size_t i = 0; i + 2 < b_; ++i) sum += mu_[i];
    const residue_t c = sub_mod(1, static_cast<residue_t>(sum % p_), p_);
    for (residue_t v = 1; v < p_; ++v) {
      const residue_t last = sub_mod(c, v, p_);
      if (last == 0) continue;
      if (mul_mod(lam_[b_ - 2], v, p_) == 1 || mul_mod(lam_[b_ - 1], last, p_) == 1) continue;
      mu_[b_ - 2] = v;
      mu_[b_ - 1] = last;
      return true;
    }
    return false;
  }

  std::size_t b_;
  residue_t p_;
  std::vector<residue_t> lam_, mu_;
};

// Nonzero vectors of length b summing to 1, in lexicographic order.
inline std::vector<std::vector<residue_t>> unit_sum_vectors(std::size_t b, residue_t p) {
  std::vector<std::vector<residue_t>> out;
  std::vector<residue_t> v(b, 1);
  while (true) {
    std::uint64_t sum = 0;
    for (std::size_t i = 0; i + 1 < b; ++i) sum += v[i];
    v[b - 1] = sub_mod(1, static_cast<residue_t>(sum % p), p);
    if (v[b - 1] != 0) out.push_back(v);
    std::size_t i = b - 1;
    while (i-- > 0) {
      if (++v[i] < p) break;
      v[i] = 1;
    }
    if (i == static_cast<std::size_t>(-1)) break;
  }
  return out;
}

inline LambdaMuChoice make_choice(PrimeField f, const std::vector<residue_t>& l, const std::vector<residue_t>& m) {
  LambdaMuChoice c{FieldVector(f, l.size()), FieldVector(f, m.size())};
  for (std::size_t j = 0; j < l.size(); ++j) {
    c.lambda.set(j, FieldElement(f, l[j]));
    c.mu.set(j, FieldElement(f, m[j]));
  }
  return c;
}

}  // namespace detail

/// `first`: the deterministic smallest choice following the constructive argument (empty
/// for p <= 3, where no choice exists). `enumerate_all`: every valid choice, sorted by
/// (lambda, mu); only allowed while p^{2b} stays within the enumeration limit.
inline std::vector<LambdaMuChoice> select_lambda_mu(std::size_t b, std::int64_t p, SelectMode mode) {
  if (b < 2) throw Error(Errc::invalid_argument, "b must be at least 2");
  const PrimeField f(p);
  const residue_t q = f.modulus();
  if (mode == SelectMode::first) {
    if (q <= 3) return {};
    detail::FirstChoiceSearch search(b, q);
    if (!search.run()) return {};
    return {detail::make_choice(f, search.lambda(), search.mu())};
  }

  BigInt space = ipow(BigInt(q), 2 * b);
  if (space > lambda_mu_enumeration_limit)
    throw Error(Errc::cap_exceeded, "p^{2b} = " + space.str() + " exceeds the enumeration limit");
  const auto vecs = detail::unit_sum_vectors(b, q);
  std::vector<LambdaMuChoice> out;
  for (const auto& l : vecs) {
    for (const auto& m : vecs) {
      bool ok = true;
      for (std::size_t j = 0; j < b && ok; ++j) ok = detail::mul_mod(l[j], m[j], q) != 1;
      if (ok) out.push_back(detail::make_choice(f, l, m));
    }
  }
  return out;
}

/// The 4b x 4b alternating matrix [[L, J], [J, M]] with 2x2 diagonal blocks
/// L_j = [[0, lambda_j], [-lambda_j, 0]], M_j likewise with mu_j, J_j = [[0, -1], [1, 0]].
inline FieldMatrix build_omega(const LambdaMuChoice& c) {
  detail::require_same_modulus(c.lambda.modulus(), c.mu.modulus());
  if (c.lambda.size() != c.mu.size()) throw Error(Errc::dimension_mismatch, "lambda and mu differ in length");
  const std::size_t b = c.lambda.size();
  const PrimeField f = c.lambda.field();
  FieldMatrix m(f, 4 * b, 4 * b);
  const std::size_t h = 2 * b;
  for (std::size_t j = 0; j < b; ++j) {
    const std::size_t r = 2 * j, t = 2 * j + 1;
    m.set(r, t, c.lambda[j]);
    m.set(t, r, -c.lambda[j]);
    m.set(h + r, h + t, c.mu[j]);
    m.set(h + t, h + r, -c.mu[j]);
    m.set(r, h + t, -1);
    m.set(t, h + r, 1);
    m.set(h + r, t, -1);
    m.set(h + t, r, 1);
  }
  return m;
}

/// Structure on H(Omega_b) or G(Omega_b) (order p^{4b+1}) for p >= 5. Generator layout:
/// x_1..x_2b carry r_11, t_11, ..., r_1b, t_1b; x_{2b+1}..x_4b carry r_21, ..., t_2b.
inline KodairaStructure construct_nonstrong(std::size_t b, std::int64_t p, Variant variant) {
  if (b < 2) throw Error(Errc::invalid_argument, "b must be at least 2");
  const PrimeField f(p);
  if (f.modulus() < 5)
    throw Error(Errc::invalid_argument, "non-strong construction needs p >= 5");
  const auto choices = select_lambda_mu(b, p, SelectMode::first);
  if (choices.empty()) throw Error(Errc::invalid_argument, "no admissible lambda/mu choice");
  auto d = GroupDescriptor::with_variant(build_omega(choices.front()), variant);
  KodairaStructure s{d, b, f.modulus(), {}, {}, {}, {}, d.central()};
  for (std::size_t j = 0; j < b; ++j) {
    s.r1.push_back(d.generator(2 * j));
    s.t1.push_back(d.generator(2 * j + 1));
    s.r2.push_back(d.generator(2 * b + 2 * j));
    s.t2.push_back(d.generator(2 * b + 2 * j + 1));
  }
  return s;
}

// ---------------------------------------------------------------------------
// Pairing reduction for class-2 descriptors with center of order p

/// c(u, v) with [u, v] = z_0^{c(u,v)}, z_0 the descriptor's central generator, for the 4b
/// tuple elements in tuple() order. In class 2 this is the bilinear form t_u^T A t_v.
inline FieldMatrix class2_pairing_reduction(const KodairaStructure& s) {
  s.validate_shape();
  const auto& d = s.descriptor;
  if (!center_rank(d).cyclic_of_order_p)
    throw Error(Errc::invalid_argument, "pairing reduction needs a center of order p");
  const auto elems = s.tuple();
  const residue_t p = d.p();
  const auto& a = d.commutator_matrix();
  FieldMatrix c(d.field(), elems.size(), elems.size());
  for (std::size_t u = 0; u < elems.size(); ++u) {
    for (std::size_t v = 0; v < elems.size(); ++v) {
      std::uint64_t acc = 0;
      for (std::size_t j = 0; j < d.rank(); ++j) {
        if (elems[u].t[j] == 0) continue;
        std::uint64_t row = 0;
        for (std::size_t k = 0; k < d.rank(); ++k) row = (row + std::uint64_t{a.raw(j, k)} * elems[v].t[k]) % p;
        acc = (acc + row * elems[u].t[j]) % p;
      }
      c.raw(u, v) = static_cast<residue_t>(acc);
    }
  }
  return c;
}

struct PairingVerdict {
  bool passed = false;
  std::vector<std::string> failures;  // relation ids, deduplicated, in check order
};

/// Decides the class-2 relation set, the order of z and generation from the pairing matrix,
/// the z-exponent of the structure's z and the rank of the tuple's t-parts alone.
inline PairingVerdict class2_pairing_predicate(const KodairaStructure& s) {
  const auto c = class2_pairing_reduction(s);
  const auto& d = s.descriptor;
  const residue_t p = d.p();
  const std::size_t b = s.b;
  PairingVerdict out;
  const auto fail = [&](const std::string& id) {
    if (std::find(out.failures.begin(), out.failures.end(), id) == out.failures.end()) out.failures.push_back(id);
  };

  const bool z_central = std::all_of(s.z.t.begin(), s.z.t.end(), [](residue_t e) { return e == 0; });
  if (!z_central) fail("central");
  const residue_t zeta = s.z.s;  // meaningful only when z is central
  const auto r1 = [&](std::size_t j) { return 2 * j; };
  const auto t1 = [&](std::size_t j) { return 2 * j + 1; };
  const auto r2 = [&](std::size_t j) { return 2 * b + 2 * j; };
  const auto t2 = [&](std::size_t j) { return 2 * b + 2 * j + 1; };

  // [u^-1, v^-1] = [u, v] and [u^-1, v] = [u, v]^-1 in class 2.
  std::uint64_t sum1 = 0, sum2 = 0;
  for (std::size_t j = 0; j < b; ++j) {
    sum1 += c.raw(r1(j), t1(j));
    sum2 += c.raw(r2(j), t2(j));
  }
  if (!z_central || sum1 % p != zeta) fail("surface.1");
  if (!z_central || sum2 % p != zeta) fail("surface.2");

  for (std::size_t j = 0; j < b; ++j) {
    for (std::size_t k = 0; k < b; ++k) {
      const residue_t delta_z = j == k ? zeta : 0;
      if (c.raw(r1(j), r2(k)) != 0) fail("r1j.r2k");
      if (!z_central || c.raw(r1(j), t2(k)) != detail::neg_mod(delta_z, p)) fail("r1j.t2k");
      if (!z_central || c.raw(t1(j), r2(k)) != delta_z) fail("t1j.r2k");
      if (c.raw(t1(j), t2(k)) != 0) fail("t1j.t2k");
    }
  }

  // Central z = z_0^zeta has order p when zeta != 0. A non-central z fails above anyway.
  const std::uint64_t z_order = z_central ? (zeta != 0 ? p : 1) : 0;
  if (z_order != s.n) fail("order.z");

  // With a nondegenerate form, a spanning tuple already produces z_0 as a commutator.
  const auto elems = s.tuple();
  FieldMatrix cols(d.field(), d.rank(), elems.size());
  for (std::size_t i = 0; i < elems.size(); ++i)
    for (std::size_t j = 0; j < d.rank(); ++j) cols.raw(j, i) = elems[i].t[j];
  if (rank(cols) != d.rank()) fail("generation");

  out.passed = out.failures.empty();
  return out;
}

}  // namespace dks
