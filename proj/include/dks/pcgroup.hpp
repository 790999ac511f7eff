#pragma once

// Central extensions 1 -> Z_p -> G -> (Z_p)^{2n} -> 1 given by a commutator matrix A and
// a power vector eps:
//
//   [x_j, x_k] = z^{a_jk},   x_j^p = z^{eps_j},   z central of order p.
//
// Elements are kept in the normal form x_1^{t_1} ... x_{2n}^{t_{2n}} z^s, so equality is
// plain tuple comparison.

#include <algorithm>
#include <array>
#include <bit>
#include <compare>
#include <cstdint>
#include <deque>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "dks/bigint.hpp"
#include "dks/error.hpp"
#include "dks/zpfield.hpp"

namespace dks {

struct GroupElement {
  std::vector<residue_t> t;  // exponents of x_1..x_{2n}
  residue_t s = 0;           // exponent of z

  friend bool operator==(const GroupElement&, const GroupElement&) = default;
  friend auto operator<=>(const GroupElement&, const GroupElement&) = default;
};

/// Power convention. H: every x_j^p = 1. G: the last two generators have x^p = z.
enum class Variant { H, G };

inline std::string to_string(Variant v) { return v == Variant::H ? "H" : "G"; }

class GroupDescriptor {
 public:
  GroupDescriptor(FieldMatrix commutators, FieldVector powers)
      : a_(std::move(commutators)), eps_(std::move(powers)) {
    detail::require_same_modulus(a_.modulus(), eps_.modulus());
    if (!a_.is_square() || a_.rows() == 0 || a_.rows() % 2 != 0)
      throw Error(Errc::invalid_argument, "commutator matrix must be square of even positive size");
    if (!a_.is_alternating())
      throw Error(Errc::invalid_argument, "commutator matrix must be anti-symmetric with zero diagonal");
    if (eps_.size() != a_.rows())
      throw Error(Errc::dimension_mismatch, "power vector length differs from rank");
  }

  static GroupDescriptor with_variant(FieldMatrix commutators, Variant v) {
    const PrimeField field(commutators.modulus());
    FieldVector eps(field, commutators.rows());
    if (v == Variant::G && commutators.rows() >= 2) {
      eps.set(commutators.rows() - 2, FieldElement(field, 1));
      eps.set(commutators.rows() - 1, FieldElement(field, 1));
    }
    return {std::move(commutators), std::move(eps)};
  }

  /// H_{2b+1}(Z_p) or G_{2b+1}(Z_p) with generators ordered r_1, t_1, ..., r_b, t_b and
  /// [r_j, t_k] = z^{-delta_jk}.
  static GroupDescriptor extra_special(std::size_t b, std::int64_t p, Variant v) {
    if (b < 1) throw Error(Errc::invalid_argument, "b must be positive");
    const PrimeField field(p);
    FieldMatrix a(field, 2 * b, 2 * b);
    for (std::size_t j = 0; j < b; ++j) {
      a.set(2 * j, 2 * j + 1, -1);
      a.set(2 * j + 1, 2 * j, 1);
    }
    return with_variant(std::move(a), v);
  }

  residue_t p() const noexcept { return a_.modulus(); }
  PrimeField field() const { return PrimeField(p()); }
  std::size_t rank() const noexcept { return a_.rows(); }
  const FieldMatrix& commutator_matrix() const noexcept { return a_; }
  const FieldVector& power_vector() const noexcept { return eps_; }
  BigInt order() const { return ipow(BigInt(p()), rank() + 1); }

  GroupElement identity() const { return {std::vector<residue_t>(rank(), 0), 0}; }

  /// x_{j+1} (zero-based index).
  GroupElement generator(std::size_t j) const {
    auto g = identity();
    g.t.at(j) = 1 % p();
    return g;
  }

  GroupElement central() const {
    auto g = identity();
    g.s = 1 % p();
    return g;
  }

  GroupElement element(std::span<const std::int64_t> t, std::int64_t s) const {
    if (t.size() != rank()) throw Error(Errc::descriptor_mismatch, "exponent vector has wrong length");
    const auto f = field();
    GroupElement g{std::vector<residue_t>(rank()), f.reduce(s)};
    for (std::size_t j = 0; j < t.size(); ++j) g.t[j] = f.reduce(t[j]);
    return g;
  }

  bool contains(const GroupElement& g) const noexcept {
    if (g.t.size() != rank() || g.s >= p()) return false;
    return std::all_of(g.t.begin(), g.t.end(), [this](residue_t e) { return e < p(); });
  }

  void require(const GroupElement& g) const {
    if (!contains(g))
      throw Error(Errc::descriptor_mismatch, "element does not belong to this group descriptor");
  }

  /// Collection: moving x_k^{u_k} left past x_j^{t_j} (j > k) costs z^{a_jk t_j u_k};
  /// each exponent overflow past p costs z^{eps_j}.
  GroupElement multiply(const GroupElement& g, const GroupElement& h) const {
    require(g);
    require(h);
    return multiply_unchecked(g, h);
  }

  GroupElement inverse(const GroupElement& g) const {
    require(g);
    const residue_t q = p();
    const std::size_t n = rank();
    GroupElement out{std::vector<residue_t>(n), 0};
    for (std::size_t j = 0; j < n; ++j) out.t[j] = detail::neg_mod(g.t[j], q);
    // g * out has zero t-part; choose s so the z-exponent vanishes too.
    std::uint64_t acc = g.s;
    for (std::size_t j = 0; j < n; ++j) {
      if (g.t[j] == 0) continue;
      acc += cross_term(g.t[j], j, out.t);
      acc += eps_.residues()[j];
      acc %= q;
    }
    out.s = detail::neg_mod(static_cast<residue_t>(acc % q), q);
    return out;
  }

  GroupElement commutator(const GroupElement& g, const GroupElement& h) const {
    return multiply(multiply(g, h), multiply(inverse(g), inverse(h)));
  }

  /// g^k for any integer k (exponent reduced mod p^2, which every element order divides).
  GroupElement power(const GroupElement& g, std::int64_t k) const {
    require(g);
    const auto pp = static_cast<std::int64_t>(p()) * static_cast<std::int64_t>(p());
    auto e = static_cast<std::uint64_t>(((k % pp) + pp) % pp);
    GroupElement result = identity(), base = g;
    while (e) {
      if (e & 1) result = multiply_unchecked(result, base);
      base = multiply_unchecked(base, base);
      e >>= 1;
    }
    return result;
  }

  std::uint64_t element_order(const GroupElement& g) const {
    require(g);
    if (g == identity()) return 1;
    if (power(g, p()) == identity()) return p();
    return std::uint64_t{p()} * p();
  }

  bool is_central(const GroupElement& g) const {
    for (std::size_t k = 0; k < rank(); ++k)
      if (commutator(g, generator(k)).s != 0) return false;
    return true;
  }

  friend bool operator==(const GroupDescriptor&, const GroupDescriptor&) = default;

 private:
  GroupElement multiply_unchecked(const GroupElement& g, const GroupElement& h) const {
    const residue_t q = p();
    const std::size_t n = rank();
    GroupElement out{std::vector<residue_t>(n), 0};
    std::uint64_t acc = std::uint64_t{g.s} + h.s;
    for (std::size_t j = 0; j < n; ++j) {
      if (g.t[j] != 0) acc += cross_term(g.t[j], j, h.t);
      std::uint64_t sum = std::uint64_t{g.t[j]} + h.t[j];
      if (sum >= q) {
        sum -= q;
        acc += eps_.residues()[j];
      }
      out.t[j] = static_cast<residue_t>(sum);
      acc %= q;
    }
    out.s = static_cast<residue_t>(acc % q);
    return out;
  }

  // t_j * sum_{k<j} a_jk u_k  (mod p)
  std::uint64_t cross_term(residue_t tj, std::size_t j, std::span<const residue_t> u) const {
    const residue_t q = p();
    std::uint64_t row = 0;
    for (std::size_t k = 0; k < j; ++k)
      if (u[k] != 0) row = (row + std::uint64_t{a_.raw(j, k)} * u[k]) % q;
    return (row * tj) % q;
  }

  FieldMatrix a_;
  FieldVector eps_;
};

template <class Rng>
GroupElement random_element(const GroupDescriptor& d, Rng& rng) {
  std::uniform_int_distribution<residue_t> dist(0, d.p() - 1);
  GroupElement g = d.identity();
  for (auto& e : g.t) e = dist(rng);
  g.s = dist(rng);
  return g;
}

// ---------------------------------------------------------------------------
// Center and extra-special classification

struct CenterInfo {
  BigInt order;                 // p^{1 + dim ker A}
  bool cyclic_of_order_p;       // ker A trivial
  std::size_t kernel_dimension;
};

/// Z(G) = {(t, s) : A t = 0}; the power vector plays no role.
inline CenterInfo center_rank(const GroupDescriptor& d) {
  const auto kernel = kernel_basis(d.commutator_matrix());
  return {ipow(BigInt(d.p()), 1 + kernel.size()), kernel.empty(), kernel.size()};
}

enum class ExtraSpecialClass { not_extra_special, exponent_p, exponent_p_squared };

inline std::string to_string(ExtraSpecialClass c) {
  switch (c) {
    case ExtraSpecialClass::not_extra_special: return "not_extra_special";
    case ExtraSpecialClass::exponent_p: return "exponent_p";
    case ExtraSpecialClass::exponent_p_squared: return "exponent_p_squared";
  }
  return "unknown";
}

/// Descriptor-level classification for odd p: extra-special iff det A != 0; the exponent
/// type is read off the power vector (eps != 0 marks exponent p^2).
inline ExtraSpecialClass classify_extra_special(const GroupDescriptor& d) {
  if (d.p() == 2)
    throw Error(Errc::unsupported, "extra-special classification is not supported for p = 2");
  if (determinant(d.commutator_matrix()).is_zero()) return ExtraSpecialClass::not_extra_special;
  return d.power_vector().is_zero() ? ExtraSpecialClass::exponent_p : ExtraSpecialClass::exponent_p_squared;
}

// ---------------------------------------------------------------------------
// Subgroup closure

inline constexpr std::uint64_t default_closure_cap = 2'000'000;

/// Order of <gens> from linear data: |H| = p^{dim W + [z in H]} where W is the span of the
/// t-parts. z lies in H iff some commutator of generators is nontrivial, some generator has
/// a nontrivial p-th power, or (H abelian of exponent p) some linear dependency among the
/// t-parts multiplies out to a nonzero power of z.
struct SpanShortcut {
  std::size_t span_dimension = 0;
  bool contains_center = false;
  BigInt order = 1;
};

inline SpanShortcut span_shortcut(const GroupDescriptor& d, std::span<const GroupElement> gens) {
  for (const auto& g : gens) d.require(g);
  const PrimeField field = d.field();
  SpanShortcut out;
  if (gens.empty()) return out;

  // Columns are the t-parts, so the kernel holds the dependency coefficients.
  FieldMatrix cols(field, d.rank(), gens.size());
  for (std::size_t i = 0; i < gens.size(); ++i)
    for (std::size_t j = 0; j < d.rank(); ++j) cols.raw(j, i) = gens[i].t[j];
  out.span_dimension = rank(cols);

  bool has_z = false;
  for (std::size_t i = 0; i < gens.size() && !has_z; ++i)
    for (std::size_t j = i + 1; j < gens.size() && !has_z; ++j)
      has_z = d.commutator(gens[i], gens[j]).s != 0;
  for (std::size_t i = 0; i < gens.size() && !has_z; ++i) has_z = d.power(gens[i], d.p()) != d.identity();
  if (!has_z) {
    // Abelian of exponent p: c -> prod g_i^{c_i} is a homomorphism, so a kernel basis suffices.
    for (const auto& c : kernel_basis(cols)) {
      GroupElement prod = d.identity();
      for (std::size_t i = 0; i < gens.size(); ++i)
        prod = d.multiply(prod, d.power(gens[i], c[i].value()));
      if (prod.s != 0) {
        has_z = true;
        break;
      }
    }
  }
  out.contains_center = has_z;
  out.order = ipow(BigInt(d.p()), out.span_dimension + (has_z ? 1 : 0));
  return out;
}

struct ClosureResult {
  SpanShortcut shortcut;
  bool complete = false;         // enumeration finished within the cap
  std::uint64_t enumerated = 0;  // exact order when complete, partial count otherwise
  std::optional<std::vector<GroupElement>> elements;  // sorted, when requested and complete

  BigInt order() const { return complete ? BigInt(enumerated) : shortcut.order; }
};

namespace detail {

struct PackedKey {
  std::array<std::uint64_t, 4> words{};
  friend bool operator==(const PackedKey&, const PackedKey&) = default;
};

struct PackedKeyHash {
  std::size_t operator()(const PackedKey& k) const noexcept {
    std::uint64_t h = 0x9e3779b97f4a7c15ULL;
    for (auto w : k.words) {
      h ^= w + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
      h *= 0xff51afd7ed558ccdULL;
    }
    return static_cast<std::size_t>(h ^ (h >> 33));
  }
};

/// Fixed-width bit packing of (t, s); fails when the group is too wide for 256 bits.
class ElementPacker {
 public:
  explicit ElementPacker(const GroupDescriptor& d)
      : bits_(static_cast<unsigned>(std::bit_width(static_cast<std::uint32_t>(d.p() - 1)))),
        digits_(d.rank() + 1) {
    if (bits_ * digits_ > 256)
      throw Error(Errc::unsupported, "group too wide for packed closure keys");
  }

  PackedKey pack(const GroupElement& g) const {
    PackedKey k;
    for (std::size_t i = 0; i < digits_; ++i) put(k, i, i + 1 < digits_ ? g.t[i] : g.s);
    return k;
  }

  GroupElement unpack(const PackedKey& k) const {
    GroupElement g{std::vector<residue_t>(digits_ - 1), 0};
    for (std::size_t i = 0; i + 1 < digits_; ++i) g.t[i] = get(k, i);
    g.s = get(k, digits_ - 1);
    return g;
  }

 private:
  void put(PackedKey& k, std::size_t i, residue_t v) const {
    for (unsigned b = 0; b < bits_; ++b) {
      const std::size_t pos = i * bits_ + b;
      if ((v >> b) & 1u) k.words[pos / 64] |= std::uint64_t{1} << (pos % 64);
    }
  }
  residue_t get(const PackedKey& k, std::size_t i) const {
    residue_t v = 0;
    for (unsigned b = 0; b < bits_; ++b) {
      const std::size_t pos = i * bits_ + b;
      if ((k.words[pos / 64] >> (pos % 64)) & 1u) v |= residue_t{1} << b;
    }
    return v;
  }

  unsigned bits_;
  std::size_t digits_;
};

}  // namespace detail

/// Breadth-first enumeration of <gens>, stopping once more than `cap` elements are seen.
/// The linear-span shortcut is always filled in as well.
inline ClosureResult subgroup_closure(const GroupDescriptor& d, std::span<const GroupElement> gens,
                                      std::uint64_t cap = default_closure_cap, bool keep_elements = false) {
  ClosureResult out;
  out.shortcut = span_shortcut(d, gens);

  std::vector<GroupElement> steps;
  for (const auto& g : gens) {
    for (auto x : {g, d.inverse(g)})
      if (x != d.identity() && std::find(steps.begin(), steps.end(), x) == steps.end()) steps.push_back(x);
  }

  const detail::ElementPacker packer(d);
  std::unordered_set<detail::PackedKey, detail::PackedKeyHash> seen;
  std::deque<detail::PackedKey> frontier;
  const auto start = packer.pack(d.identity());
  seen.insert(start);
  frontier.push_back(start);

  while (!frontier.empty()) {
    const GroupElement x = packer.unpack(frontier.front());
    frontier.pop_front();
    for (const auto& g : steps) {
      const auto key = packer.pack(d.multiply(x, g));
      if (!seen.insert(key).second) continue;
      if (seen.size() > cap) {
        out.enumerated = seen.size();
        return out;
      }
      frontier.push_back(key);
    }
  }

  out.complete = true;
  out.enumerated = seen.size();
  if (keep_elements) {
    std::vector<GroupElement> elems;
    elems.reserve(seen.size());
    for (const auto& k : seen) elems.push_back(packer.unpack(k));
    std::sort(elems.begin(), elems.end());
    out.elements = std::move(elems);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Matrix Heisenberg model: (x, y, z) stands for the (b+2)x(b+2) unitriangular matrix with
// top row (1, x, z) and right column (z, y, 1)^T.

struct HeisMatrix {
  std::vector<residue_t> x, y;
  residue_t z = 0;

  friend bool operator==(const HeisMatrix&, const HeisMatrix&) = default;
};

/// (x,y,z)(x',y',z') = (x+x', y+y', z+z'+x.y')
inline HeisMatrix heis_multiply(const HeisMatrix& m, const HeisMatrix& n, residue_t p) {
  HeisMatrix out{std::vector<residue_t>(m.x.size()), std::vector<residue_t>(m.y.size()), 0};
  std::uint64_t z = std::uint64_t{m.z} + n.z;
  for (std::size_t i = 0; i < m.x.size(); ++i) {
    out.x[i] = detail::add_mod(m.x[i], n.x[i], p);
    out.y[i] = detail::add_mod(m.y[i], n.y[i], p);
    z = (z + std::uint64_t{m.x[i]} * n.y[i]) % p;
  }
  out.z = static_cast<residue_t>(z % p);
  return out;
}

inline HeisMatrix heis_power(HeisMatrix base, std::uint64_t e, residue_t p) {
  HeisMatrix result{std::vector<residue_t>(base.x.size(), 0), std::vector<residue_t>(base.y.size(), 0), 0};
  while (e) {
    if (e & 1) result = heis_multiply(result, base, p);
    base = heis_multiply(base, base, p);
    e >>= 1;
  }
  return result;
}

/// Image of a normal-form word under r_j -> (0, e_j, 0), t_j -> (e_j, 0, 0), z -> (0, 0, 1),
/// where x_{2j-1} = r_j and x_{2j} = t_j. Evaluated purely by matrix products.
inline HeisMatrix to_heis(const GroupElement& g, std::size_t b, residue_t p) {
  HeisMatrix acc{std::vector<residue_t>(b, 0), std::vector<residue_t>(b, 0), 0};
  for (std::size_t i = 0; i < 2 * b; ++i) {
    HeisMatrix gen{std::vector<residue_t>(b, 0), std::vector<residue_t>(b, 0), 0};
    if (i % 2 == 0) gen.y[i / 2] = 1;
    else gen.x[i / 2] = 1;
    acc = heis_multiply(acc, heis_power(gen, g.t[i], p), p);
  }
  HeisMatrix zgen{std::vector<residue_t>(b, 0), std::vector<residue_t>(b, 0), 1 % p};
  return heis_multiply(acc, heis_power(zgen, g.s, p), p);
}

/// Checks that the normal-form map into the matrix model is a homomorphism for `d`.
/// Exhaustive over all pairs when |G| <= 3^5, otherwise `samples` seeded random pairs.
inline bool heis_oracle_check(const GroupDescriptor& d, std::uint64_t samples, std::uint64_t seed) {
  const std::size_t b = d.rank() / 2;
  const residue_t p = d.p();
  const auto agrees = [&](const GroupElement& g, const GroupElement& h) {
    return to_heis(d.multiply(g, h), b, p) == heis_multiply(to_heis(g, b, p), to_heis(h, b, p), p);
  };

  if (d.order() <= 243) {
    const auto total = static_cast<std::uint64_t>(d.order());
    std::vector<GroupElement> all;
    all.reserve(total);
    for (std::uint64_t code = 0; code < total; ++code) {
      GroupElement g = d.identity();
      std::uint64_t c = code;
      for (auto& e : g.t) {
        e = static_cast<residue_t>(c % p);
        c /= p;
      }
      g.s = static_cast<residue_t>(c % p);
      all.push_back(std::move(g));
    }
    for (const auto& g : all)
      for (const auto& h : all)
        if (!agrees(g, h)) return false;
    return true;
  }

  std::mt19937_64 rng(seed);
  for (std::uint64_t i = 0; i < samples; ++i) {
    const auto g = random_element(d, rng);
    const auto h = random_element(d, rng);
    if (!agrees(g, h)) return false;
  }
  return true;
}

inline bool heis_oracle_check(std::size_t b, std::int64_t p, std::uint64_t samples, std::uint64_t seed) {
  return heis_oracle_check(GroupDescriptor::extra_special(b, p, Variant::H), samples, seed);
}

}  // namespace dks
