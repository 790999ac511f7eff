#pragma once

// Arithmetic in the prime field Z_p and small dense linear algebra over it.

#include <cstddef>
#include <cstdint>
#include <ostream>
#include <span>
#include <initializer_list>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "dks/error.hpp"

namespace dks {

using residue_t = std::uint32_t;

/// Moduli must stay below this bound so that a product of two residues fits in 64 bits.
inline constexpr std::uint64_t max_modulus = std::uint64_t{1} << 31;

constexpr bool is_prime(std::uint64_t n) noexcept {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (std::uint64_t d = 3; d * d <= n; d += 2)
    if (n % d == 0) return false;
  return true;
}

/// A validated prime modulus. All field objects are created through one of these,
/// so primality is checked once per family rather than per element.
class PrimeField {
 public:
  explicit PrimeField(std::int64_t p) {
    if (p < 2 || static_cast<std::uint64_t>(p) >= max_modulus || !is_prime(static_cast<std::uint64_t>(p)))
      throw Error(Errc::invalid_argument, "modulus " + std::to_string(p) + " is not a prime below 2^31");
    p_ = static_cast<residue_t>(p);
  }

  residue_t modulus() const noexcept { return p_; }

  /// Reduce an arbitrary integer into [0, p).
  residue_t reduce(std::int64_t v) const noexcept {
    const auto p = static_cast<std::int64_t>(p_);
    auto r = v % p;
    return static_cast<residue_t>(r < 0 ? r + p : r);
  }

  friend bool operator==(PrimeField, PrimeField) = default;

 private:
  residue_t p_ = 2;
};

namespace detail {

inline residue_t add_mod(residue_t a, residue_t b, residue_t p) noexcept {
  const std::uint64_t s = std::uint64_t{a} + b;
  return static_cast<residue_t>(s >= p ? s - p : s);
}
inline residue_t sub_mod(residue_t a, residue_t b, residue_t p) noexcept {
  return a >= b ? a - b : static_cast<residue_t>(std::uint64_t{a} + p - b);
}
inline residue_t mul_mod(residue_t a, residue_t b, residue_t p) noexcept {
  return static_cast<residue_t>((std::uint64_t{a} * b) % p);
}
inline residue_t neg_mod(residue_t a, residue_t p) noexcept { return a == 0 ? 0 : p - a; }

inline residue_t pow_mod(residue_t a, std::uint64_t e, residue_t p) noexcept {
  std::uint64_t result = 1 % p, base = a % p;
  while (e) {
    if (e & 1) result = result * base % p;
    base = base * base % p;
    e >>= 1;
  }
  return static_cast<residue_t>(result);
}

inline residue_t inv_mod(residue_t a, residue_t p) {
  if (a % p == 0) throw Error(Errc::division_by_zero, "inverse of zero in Z_" + std::to_string(p));
  // Extended Euclid on signed 64-bit values.
  std::int64_t r0 = p, r1 = a, s0 = 0, s1 = 1;
  while (r1 != 0) {
    const std::int64_t q = r0 / r1;
    std::tie(r0, r1) = std::pair{r1, r0 - q * r1};
    std::tie(s0, s1) = std::pair{s1, s0 - q * s1};
  }
  s0 %= static_cast<std::int64_t>(p);
  return static_cast<residue_t>(s0 < 0 ? s0 + p : s0);
}

inline void require_same_modulus(residue_t p, residue_t q) {
  if (p != q)
    throw Error(Errc::modulus_mismatch,
                "modulus mismatch: " + std::to_string(p) + " vs " + std::to_string(q));
}

}  // namespace detail

class FieldElement {
 public:
  FieldElement(PrimeField field, std::int64_t value) : value_(field.reduce(value)), p_(field.modulus()) {}

  residue_t value() const noexcept { return value_; }
  residue_t modulus() const noexcept { return p_; }
  PrimeField field() const { return PrimeField(p_); }
  bool is_zero() const noexcept { return value_ == 0; }

  FieldElement inv() const { return {detail::inv_mod(value_, p_), p_}; }
  FieldElement pow(std::uint64_t e) const { return {detail::pow_mod(value_, e, p_), p_}; }

  FieldElement operator-() const { return {detail::neg_mod(value_, p_), p_}; }

  friend FieldElement operator+(FieldElement a, FieldElement b) {
    detail::require_same_modulus(a.p_, b.p_);
    return {detail::add_mod(a.value_, b.value_, a.p_), a.p_};
  }
  friend FieldElement operator-(FieldElement a, FieldElement b) {
    detail::require_same_modulus(a.p_, b.p_);
    return {detail::sub_mod(a.value_, b.value_, a.p_), a.p_};
  }
  friend FieldElement operator*(FieldElement a, FieldElement b) {
    detail::require_same_modulus(a.p_, b.p_);
    return {detail::mul_mod(a.value_, b.value_, a.p_), a.p_};
  }
  friend FieldElement operator/(FieldElement a, FieldElement b) {
    detail::require_same_modulus(a.p_, b.p_);
    return a * b.inv();
  }

  FieldElement& operator+=(FieldElement o) { return *this = *this + o; }
  FieldElement& operator-=(FieldElement o) { return *this = *this - o; }
  FieldElement& operator*=(FieldElement o) { return *this = *this * o; }

  friend bool operator==(FieldElement, FieldElement) = default;

  friend std::ostream& operator<<(std::ostream& os, FieldElement a) {
    return os << a.value_ << " (mod " << a.p_ << ")";
  }

 private:
  // Trusted: modulus already validated, value already reduced.
  FieldElement(residue_t v, residue_t p) noexcept : value_(v), p_(p) {}
  friend class FieldVector;
  friend class FieldMatrix;

  residue_t value_;
  residue_t p_;
};

class FieldVector {
 public:
  FieldVector(PrimeField field, std::size_t length) : p_(field.modulus()), entries_(length, 0) {}

  FieldVector(PrimeField field, std::span<const std::int64_t> values) : p_(field.modulus()) {
    entries_.reserve(values.size());
    for (auto v : values) entries_.push_back(field.reduce(v));
  }

  FieldVector(PrimeField field, std::initializer_list<std::int64_t> values)
      : FieldVector(field, std::span<const std::int64_t>(values.begin(), values.size())) {}

  static FieldVector unit(PrimeField field, std::size_t length, std::size_t index) {
    FieldVector v(field, length);
    v.entries_.at(index) = 1;
    return v;
  }

  residue_t modulus() const noexcept { return p_; }
  PrimeField field() const { return PrimeField(p_); }
  std::size_t size() const noexcept { return entries_.size(); }

  FieldElement operator[](std::size_t i) const { return {entries_[i], p_}; }
  void set(std::size_t i, FieldElement v) {
    detail::require_same_modulus(p_, v.modulus());
    entries_.at(i) = v.value();
  }

  std::span<const residue_t> residues() const noexcept { return entries_; }
  bool is_zero() const noexcept {
    for (auto e : entries_)
      if (e != 0) return false;
    return true;
  }

  friend bool operator==(const FieldVector&, const FieldVector&) = default;

 private:
  residue_t p_;
  std::vector<residue_t> entries_;
};

/// Dense row-major matrix over Z_p.
class FieldMatrix {
 public:
  FieldMatrix(PrimeField field, std::size_t rows, std::size_t cols)
      : p_(field.modulus()), rows_(rows), cols_(cols), entries_(rows * cols, 0) {}

  FieldMatrix(PrimeField field, const std::vector<std::vector<std::int64_t>>& rows)
      : p_(field.modulus()), rows_(rows.size()), cols_(rows.empty() ? 0 : rows.front().size()) {
    entries_.reserve(rows_ * cols_);
    for (const auto& row : rows) {
      if (row.size() != cols_) throw Error(Errc::dimension_mismatch, "ragged matrix rows");
      for (auto v : row) entries_.push_back(field.reduce(v));
    }
  }

  static FieldMatrix identity(PrimeField field, std::size_t n) {
    FieldMatrix m(field, n, n);
    for (std::size_t i = 0; i < n; ++i) m.raw(i, i) = 1;
    return m;
  }

  residue_t modulus() const noexcept { return p_; }
  PrimeField field() const { return PrimeField(p_); }
  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }

  FieldElement operator()(std::size_t r, std::size_t c) const { return {entries_[r * cols_ + c], p_}; }
  void set(std::size_t r, std::size_t c, FieldElement v) {
    detail::require_same_modulus(p_, v.modulus());
    raw(r, c) = v.value();
  }
  void set(std::size_t r, std::size_t c, std::int64_t v) { raw(r, c) = PrimeField(p_).reduce(v); }

  residue_t& raw(std::size_t r, std::size_t c) { return entries_.at(r * cols_ + c); }
  residue_t raw(std::size_t r, std::size_t c) const { return entries_.at(r * cols_ + c); }

  FieldMatrix transpose() const {
    FieldMatrix t(PrimeField(p_), cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) t.raw(c, r) = raw(r, c);
    return t;
  }

  /// Anti-symmetric with zero diagonal (alternating).
  bool is_alternating() const {
    if (!is_square()) return false;
    for (std::size_t r = 0; r < rows_; ++r) {
      if (raw(r, r) != 0) return false;
      for (std::size_t c = r + 1; c < cols_; ++c)
        if (raw(r, c) != detail::neg_mod(raw(c, r), p_)) return false;
    }
    return true;
  }

  FieldVector operator*(const FieldVector& v) const {
    detail::require_same_modulus(p_, v.modulus());
    if (v.size() != cols_) throw Error(Errc::dimension_mismatch, "matrix-vector size mismatch");
    FieldVector out(PrimeField(p_), rows_);
    auto x = v.residues();
    for (std::size_t r = 0; r < rows_; ++r) {
      std::uint64_t acc = 0;
      for (std::size_t c = 0; c < cols_; ++c) acc = (acc + std::uint64_t{raw(r, c)} * x[c]) % p_;
      out.set(r, FieldElement(PrimeField(p_), static_cast<std::int64_t>(acc)));
    }
    return out;
  }

  std::vector<std::vector<std::int64_t>> to_rows() const {
    std::vector<std::vector<std::int64_t>> out(rows_, std::vector<std::int64_t>(cols_));
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) out[r][c] = raw(r, c);
    return out;
  }

  friend bool operator==(const FieldMatrix&, const FieldMatrix&) = default;

 private:
  residue_t p_;
  std::size_t rows_, cols_;
  std::vector<residue_t> entries_;
};

/// Row-reduce in place to reduced row echelon form; returns the pivot columns.
inline std::vector<std::size_t> rref(FieldMatrix& m) {
  const residue_t p = m.modulus();
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
    std::size_t sel = row;
    while (sel < m.rows() && m.raw(sel, col) == 0) ++sel;
    if (sel == m.rows()) continue;
    if (sel != row)
      for (std::size_t c = 0; c < m.cols(); ++c) std::swap(m.raw(sel, c), m.raw(row, c));
    const residue_t inv = detail::inv_mod(m.raw(row, col), p);
    for (std::size_t c = 0; c < m.cols(); ++c) m.raw(row, c) = detail::mul_mod(m.raw(row, c), inv, p);
    for (std::size_t r = 0; r < m.rows(); ++r) {
      if (r == row || m.raw(r, col) == 0) continue;
      const residue_t f = m.raw(r, col);
      for (std::size_t c = 0; c < m.cols(); ++c)
        m.raw(r, c) = detail::sub_mod(m.raw(r, c), detail::mul_mod(f, m.raw(row, c), p), p);
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

inline std::size_t rank(FieldMatrix m) { return rref(m).size(); }

/// Determinant by pivoted Gaussian elimination.
inline FieldElement determinant(FieldMatrix m) {
  if (!m.is_square()) throw Error(Errc::dimension_mismatch, "determinant of a non-square matrix");
  const PrimeField field(m.modulus());
  const residue_t p = m.modulus();
  const std::size_t n = m.rows();
  residue_t det = 1 % p;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t sel = col;
    while (sel < n && m.raw(sel, col) == 0) ++sel;
    if (sel == n) return FieldElement(field, 0);
    if (sel != col) {
      for (std::size_t c = 0; c < n; ++c) std::swap(m.raw(sel, c), m.raw(col, c));
      det = detail::neg_mod(det, p);
    }
    const residue_t pivot = m.raw(col, col);
    det = detail::mul_mod(det, pivot, p);
    const residue_t inv = detail::inv_mod(pivot, p);
    for (std::size_t r = col + 1; r < n; ++r) {
      if (m.raw(r, col) == 0) continue;
      const residue_t f = detail::mul_mod(m.raw(r, col), inv, p);
      for (std::size_t c = col; c < n; ++c)
        m.raw(r, c) = detail::sub_mod(m.raw(r, c), detail::mul_mod(f, m.raw(col, c), p), p);
    }
  }
  return FieldElement(field, det);
}

/// Basis of the right null space {t : m t = 0}. The basis vectors, read as the columns
/// of a matrix, are in reduced column echelon form, so the output is canonical.
inline std::vector<FieldVector> kernel_basis(const FieldMatrix& m) {
  const PrimeField field(m.modulus());
  const residue_t p = m.modulus();
  FieldMatrix reduced = m;
  const auto pivots = rref(reduced);

  std::vector<bool> is_pivot(m.cols(), false);
  for (auto c : pivots) is_pivot[c] = true;

  std::vector<std::size_t> free_cols;
  for (std::size_t c = 0; c < m.cols(); ++c)
    if (!is_pivot[c]) free_cols.push_back(c);
  if (free_cols.empty()) return {};

  // One vector per free column; stack them as rows and reduce again for canonical form.
  FieldMatrix stacked(field, free_cols.size(), m.cols());
  for (std::size_t i = 0; i < free_cols.size(); ++i) {
    const std::size_t f = free_cols[i];
    stacked.raw(i, f) = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r)
      stacked.raw(i, pivots[r]) = detail::neg_mod(reduced.raw(r, f), p);
  }
  rref(stacked);

  std::vector<FieldVector> basis;
  basis.reserve(free_cols.size());
  for (std::size_t i = 0; i < stacked.rows(); ++i) {
    FieldVector v(field, m.cols());
    for (std::size_t c = 0; c < m.cols(); ++c) v.set(c, stacked(i, c));
    basis.push_back(std::move(v));
  }
  return basis;
}

}  // namespace dks
