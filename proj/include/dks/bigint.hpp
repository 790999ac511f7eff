#pragma once

#include <cstdint>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace dks {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

inline BigInt ipow(const BigInt& base, std::uint64_t exp) {
  BigInt result = 1, b = base;
  while (exp) {
    if (exp & 1) result *= b;
    b *= b;
    exp >>= 1;
  }
  return result;
}

inline BigRational make_rational(const BigInt& num, const BigInt& den) { return BigRational(num, den); }

/// "u/v" for non-integers, "u" otherwise.
inline std::string to_string(const BigRational& q) {
  const BigInt num = boost::multiprecision::numerator(q);
  const BigInt den = boost::multiprecision::denominator(q);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

inline std::string to_string(const BigInt& z) { return z.str(); }

/// Exact integer square root test: returns true and sets root when v is a perfect square.
inline bool is_perfect_square(const BigInt& v, BigInt& root) {
  if (v < 0) return false;
  root = boost::multiprecision::sqrt(v);
  return root * root == v;
}

}  // namespace dks
