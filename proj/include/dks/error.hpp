#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dks {

/// Failure categories. Each maps to a stable diagnostic code used by the CLI.
enum class Errc {
  invalid_argument,   // bad parameter value (non-prime modulus, b < 2, ...)
  modulus_mismatch,   // field elements from different fields
  division_by_zero,
  dimension_mismatch, // matrix/vector shapes do not agree
  descriptor_mismatch,
  unsupported,        // e.g. extra-special classification for p = 2
  cap_exceeded,       // enumeration bound hit
  parse_error,        // malformed JSON
  schema_error,       // JSON well-formed but not the expected shape
  inconsistent_data,  // e.g. non-integral genus from the invariant formulas
};

constexpr std::string_view diagnostic_code(Errc code) noexcept {
  switch (code) {
    case Errc::invalid_argument: return "E_INVALID_ARGUMENT";
    case Errc::modulus_mismatch: return "E_MODULUS_MISMATCH";
    case Errc::division_by_zero: return "E_DIVISION_BY_ZERO";
    case Errc::dimension_mismatch: return "E_DIMENSION_MISMATCH";
    case Errc::descriptor_mismatch: return "E_DESCRIPTOR_MISMATCH";
    case Errc::unsupported: return "E_UNSUPPORTED";
    case Errc::cap_exceeded: return "E_CAP_EXCEEDED";
    case Errc::parse_error: return "E_PARSE";
    case Errc::schema_error: return "E_SCHEMA";
    case Errc::inconsistent_data: return "E_INCONSISTENT_DATA";
  }
  return "E_UNKNOWN";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace dks
