#pragma once

// JSON schemas:
//
//   matrix      {"p": int, "entries": [[int]]}
//   descriptor  {"p": int, "rank": int, "A": [[int]], "epsilon": [int]}
//   element     {"t": [int], "s": int}
//   structure   {"descriptor": ..., "b": int, "n": int,
//                "r1": [element], "t1": [...], "r2": [...], "t2": [...], "z": element}
//
// Big integers are written as JSON numbers when they fit in 64 bits and as decimal strings
// otherwise; rationals are always "u/v" strings (or "u" when integral). Keys are emitted in
// a fixed order so that output is byte-for-byte reproducible.

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include <json.hpp>

#include "dks/bigint.hpp"
#include "dks/error.hpp"
#include "dks/kodaira.hpp"
#include "dks/pcgroup.hpp"
#include "dks/surface.hpp"
#include "dks/zpfield.hpp"

namespace dks::io {

using Json = nlohmann::ordered_json;

inline Json big(const BigInt& v) {
  if (v >= std::numeric_limits<std::int64_t>::min() && v <= std::numeric_limits<std::int64_t>::max())
    return static_cast<std::int64_t>(v);
  return v.str();
}

inline Json rational(const BigRational& q) { return to_string(q); }

inline Json to_json(const GroupElement& g) {
  Json t = Json::array();
  for (auto e : g.t) t.push_back(e);
  return Json{{"t", t}, {"s", g.s}};
}

inline Json to_json(const FieldMatrix& m) { return Json{{"p", m.modulus()}, {"entries", m.to_rows()}}; }

inline Json to_json(const FieldVector& v) {
  Json out = Json::array();
  for (auto e : v.residues()) out.push_back(e);
  return out;
}

inline Json to_json(const GroupDescriptor& d) {
  return Json{{"p", d.p()},
              {"rank", d.rank()},
              {"A", d.commutator_matrix().to_rows()},
              {"epsilon", to_json(d.power_vector())}};
}

inline Json elements_json(const std::vector<GroupElement>& xs) {
  Json out = Json::array();
  for (const auto& x : xs) out.push_back(to_json(x));
  return out;
}

inline Json to_json(const KodairaStructure& s) {
  return Json{{"descriptor", to_json(s.descriptor)},
              {"b", s.b},
              {"n", s.n},
              {"r1", elements_json(s.r1)},
              {"t1", elements_json(s.t1)},
              {"r2", elements_json(s.r2)},
              {"t2", elements_json(s.t2)},
              {"z", to_json(s.z)}};
}

inline Json to_json(const VerificationReport& r) {
  Json violations = Json::array();
  for (const auto& v : r.violations)
    violations.push_back(Json{{"relation", v.relation}, {"j", v.j}, {"k", v.k},
                              {"lhs", to_json(v.lhs)}, {"rhs", to_json(v.rhs)}});
  const auto order = [](const std::optional<BigInt>& o) { return o ? big(*o) : Json("overflow"); };
  return Json{{"mode", to_string(r.mode)},
              {"passed", r.passed},
              {"violations", violations},
              {"z_order", r.z_order},
              {"z_order_ok", r.z_order_ok},
              {"generates", r.generates},
              {"strength", to_string(r.strength)},
              {"group_order", big(r.group_order)},
              {"k1_order", order(r.k1_order)},
              {"k2_order", order(r.k2_order)}};
}

inline Json to_json(const SurfaceInvariants& inv) {
  return Json{{"c1sq", big(inv.c1sq)}, {"c2", big(inv.c2)},   {"sigma", big(inv.sigma)},
              {"slope", rational(inv.slope)}, {"b1", big(inv.b1)}, {"b2", big(inv.b2)},
              {"g1", big(inv.g1)},     {"g2", big(inv.g2)},   {"frak_n", rational(inv.frak_n)}};
}

inline Json to_json(const FeasibilityVerdict& v) {
  return Json{{"b", v.b},
              {"s", rational(v.s)},
              {"feasible", v.feasible},
              {"admissible_n", v.admissible_n},
              {"discriminant", rational(v.discriminant)},
              {"discriminant_is_square", v.discriminant_is_square},
              {"quadratic", Json::array({rational(v.quad_a), rational(v.quad_b), rational(v.quad_c)})},
              {"below_bound", v.below_bound}};
}

inline Json to_json(const LambdaMuChoice& c) {
  return Json{{"lambda", to_json(c.lambda)}, {"mu", to_json(c.mu)}};
}

inline Json to_json(const SlopeTable& t) {
  Json rows = Json::array();
  for (const auto& r : t.rows)
    rows.push_back(Json{{"p", r.p}, {"slope", rational(r.slope)}, {"sigma", big(r.sigma)},
                        {"excess", rational(r.excess)}});
  return Json{{"b", t.b},
              {"limit", rational(t.limit)},
              {"strictly_decreasing_from_7", t.strictly_decreasing_from_7},
              {"above_limit", t.above_limit},
              {"rows", rows}};
}

inline Json to_json(const KappaRow& r) {
  Json sig = Json::array();
  for (const auto& s : r.signatures) sig.push_back(big(s));
  Json out{{"b", r.b}, {"omega", r.omega}, {"primes", r.primes}, {"signatures", sig},
           {"signatures_distinct", r.signatures_distinct}};
  if (r.structures_verified) out["structures_verified"] = *r.structures_verified;
  return out;
}

// ---------------------------------------------------------------------------
// Parsing

namespace detail {

[[noreturn]] inline void schema(const std::string& what) { throw Error(Errc::schema_error, what); }

inline const Json& field(const Json& j, const char* key) {
  if (!j.is_object()) schema(std::string("expected an object holding \"") + key + "\"");
  auto it = j.find(key);
  if (it == j.end()) schema(std::string("missing field \"") + key + "\"");
  return *it;
}

inline std::int64_t integer(const Json& j, const char* what) {
  if (!j.is_number_integer()) schema(std::string("\"") + what + "\" must be an integer");
  return j.get<std::int64_t>();
}

inline std::vector<std::int64_t> int_array(const Json& j, const char* what) {
  if (!j.is_array()) schema(std::string("\"") + what + "\" must be an array");
  std::vector<std::int64_t> out;
  for (const auto& e : j) out.push_back(integer(e, what));
  return out;
}

}  // namespace detail

inline Json parse(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(Errc::parse_error, std::string("malformed JSON: ") + e.what());
  }
}

inline FieldMatrix matrix_from_json(const Json& j) {
  const PrimeField f(detail::integer(detail::field(j, "p"), "p"));
  const auto& rows = detail::field(j, "entries");
  if (!rows.is_array()) detail::schema("\"entries\" must be an array of arrays");
  std::vector<std::vector<std::int64_t>> data;
  for (const auto& r : rows) data.push_back(detail::int_array(r, "entries"));
  return FieldMatrix(f, data);
}

inline GroupDescriptor descriptor_from_json(const Json& j) {
  const PrimeField f(detail::integer(detail::field(j, "p"), "p"));
  const auto rank = detail::integer(detail::field(j, "rank"), "rank");
  const auto& rows = detail::field(j, "A");
  if (!rows.is_array()) detail::schema("\"A\" must be an array of arrays");
  std::vector<std::vector<std::int64_t>> a;
  for (const auto& r : rows) a.push_back(detail::int_array(r, "A"));
  if (static_cast<std::int64_t>(a.size()) != rank) detail::schema("\"A\" row count differs from \"rank\"");
  for (const auto& r : a)
    if (static_cast<std::int64_t>(r.size()) != rank) detail::schema("\"A\" must be rank x rank");
  const auto eps = detail::int_array(detail::field(j, "epsilon"), "epsilon");
  if (static_cast<std::int64_t>(eps.size()) != rank) detail::schema("\"epsilon\" length differs from \"rank\"");
  return GroupDescriptor(FieldMatrix(f, a), FieldVector(f, std::span<const std::int64_t>(eps)));
}

inline GroupElement element_from_json(const GroupDescriptor& d, const Json& j) {
  const auto t = detail::int_array(detail::field(j, "t"), "t");
  if (t.size() != d.rank()) detail::schema("element \"t\" length differs from the descriptor rank");
  return d.element(t, detail::integer(detail::field(j, "s"), "s"));
}

inline KodairaStructure structure_from_json(const Json& j) {
  auto d = descriptor_from_json(detail::field(j, "descriptor"));
  const auto b = detail::integer(detail::field(j, "b"), "b");
  const auto n = detail::integer(detail::field(j, "n"), "n");
  if (b < 2) detail::schema("\"b\" must be at least 2");
  if (n < 2) detail::schema("\"n\" must be at least 2");
  const auto list = [&](const char* key) {
    const auto& arr = detail::field(j, key);
    if (!arr.is_array() || static_cast<std::int64_t>(arr.size()) != b)
      detail::schema(std::string("\"") + key + "\" must be an array of b elements");
    std::vector<GroupElement> out;
    for (const auto& e : arr) out.push_back(element_from_json(d, e));
    return out;
  };
  KodairaStructure s{d, static_cast<std::size_t>(b), static_cast<std::uint64_t>(n),
                     list("r1"), list("t1"), list("r2"), list("t2"),
                     element_from_json(d, detail::field(j, "z"))};
  return s;
}

}  // namespace dks::io
