#include <algorithm>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "dks/json_io.hpp"
#include "dks/kodaira.hpp"
#include "oracles.hpp"

using namespace dks;

namespace {

bool has(const VerificationReport& r, const std::string& rel, std::size_t j = 0, std::size_t k = 0) {
  return std::any_of(r.violations.begin(), r.violations.end(), [&](const Violation& v) {
    return v.relation == rel && (j == 0 || v.j == j) && (k == 0 || v.k == k);
  });
}

oracle::Tuple to_oracle(const KodairaStructure& s, std::size_t desc_b) {
  const auto p = static_cast<std::int64_t>(s.descriptor.p());
  const auto conv = [&](const std::vector<GroupElement>& xs) {
    std::vector<oracle::UniMat> out;
    for (const auto& x : xs) out.push_back(oracle::from_element(x, desc_b, p));
    return out;
  };
  return {conv(s.r1), conv(s.t1), conv(s.r2), conv(s.t2), oracle::from_element(s.z, desc_b, p), s.n};
}

// Random tuples in H_5(Z_3) drawn from three pools: uniform (almost always invalid), the
// strong structure shifted by central elements (valid), and the strong structure with one
// entry replaced (mostly invalid, occasionally valid).
KodairaStructure random_tuple(std::mt19937_64& rng, int pool) {
  const auto base = construct_strong(2, 3, Variant::H);
  const auto& d = base.descriptor;
  auto s = base;
  std::uniform_int_distribution<int> pick(0, 8), small(0, 2);
  const auto every = [&](auto&& f) {
    for (auto* v : {&s.r1, &s.t1, &s.r2, &s.t2})
      for (auto& g : *v) f(g);
  };
  switch (pool) {
    case 0:
      every([&](GroupElement& g) { g = random_element(d, rng); });
      s.z = small(rng) == 0 ? random_element(d, rng) : d.power(d.central(), 1 + small(rng) % 2);
      break;
    case 1:
      every([&](GroupElement& g) { g = d.multiply(g, d.power(d.central(), small(rng))); });
      break;
    default: {
      const int slot = pick(rng);
      const auto g = random_element(d, rng);
      if (slot == 8) s.z = g;
      else (slot < 2 ? s.r1 : slot < 4 ? s.t1 : slot < 6 ? s.r2 : s.t2)[slot % 2] = g;
    }
  }
  return s;
}

std::vector<residue_t> vec(std::span<const residue_t> xs) { return {xs.begin(), xs.end()}; }

}  // namespace

TEST(ConstructStrong, KnownValues) {
  const auto s = construct_strong(2, 3, Variant::H);
  EXPECT_EQ(s.descriptor.order(), 243);
  EXPECT_EQ(s.b, 2u);
  EXPECT_EQ(s.n, 3u);
  EXPECT_EQ(construct_strong(4, 5, Variant::G).descriptor.order(), 1953125);
  try {
    construct_strong(2, 5, Variant::H);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::invalid_argument);
  }
  EXPECT_THROW(construct_strong(1, 2, Variant::H), Error);
}

TEST(VerifyFull, StrongConstructions) {
  for (auto v : {Variant::H, Variant::G})
    for (auto [b, p] : {std::pair{2, 3}, {3, 2}, {4, 5}, {5, 3}, {6, 7}, {7, 2}}) {
      if (v == Variant::G && p == 2) continue;
      const auto s = construct_strong(b, p, v);
      const auto r = verify_full(s);
      EXPECT_TRUE(r.passed) << b << "," << p;
      EXPECT_TRUE(r.violations.empty());
      EXPECT_EQ(r.strength, Strength::strong);
      EXPECT_EQ(r.z_order, static_cast<std::uint64_t>(p));
      EXPECT_TRUE(verify_class2(s).passed);
    }
}

TEST(VerifyFull, AbelianDescriptorFails) {
  const PrimeField f(3);
  const GroupDescriptor abelian(FieldMatrix(f, 4, 4), FieldVector(f, 4));
  auto s = construct_strong(2, 3, Variant::H);
  s.descriptor = abelian;
  const auto r = verify_full(s);
  EXPECT_FALSE(r.passed);
  EXPECT_TRUE(has(r, "r1j.t2j.eq", 1, 1));
  EXPECT_FALSE(verify_class2(s).passed);
  EXPECT_THROW(class2_pairing_predicate(s), Error);
}

// Replacing z by z^2 breaks both surface relations. It also breaks [r_1j, t_2j] = z^-1 and
// [t_1j, r_2j] = t_2j^-1 z t_2j, since the commutators themselves do not change.
TEST(VerifyFull, SquaredZ) {
  auto s = construct_strong(2, 3, Variant::H);
  s.z = s.descriptor.power(s.z, 2);
  const auto r = verify_full(s);
  EXPECT_FALSE(r.passed);
  EXPECT_TRUE(has(r, "surface.1"));
  EXPECT_TRUE(has(r, "surface.2"));
  std::set<std::string> rels;
  for (const auto& v : r.violations) rels.insert(v.relation);
  EXPECT_EQ(rels, (std::set<std::string>{"surface.1", "surface.2", "r1j.t2j.eq", "t1j.r2j.eq"}));
}

TEST(VerifyFull, SwappedGenerators) {
  for (auto make : {+[] { return construct_strong(2, 3, Variant::H); },
                    +[] { return construct_nonstrong(2, 5, Variant::G); }}) {
    auto s = make();
    std::swap(s.r1[0], s.t1[0]);
    const auto r = verify_full(s);
    EXPECT_FALSE(r.passed);
    EXPECT_TRUE(has(r, "r1j.t2j.eq", 1, 1));
  }
}

TEST(VerifyFull, ViolationRecordsBothSides) {
  auto s = construct_strong(2, 3, Variant::H);
  s.t2[1] = s.descriptor.identity();
  const auto r = verify_full(s);
  ASSERT_TRUE(has(r, "r1j.t2j.eq", 2, 2));
  const auto it = std::find_if(r.violations.begin(), r.violations.end(),
                               [](const Violation& v) { return v.relation == "r1j.t2j.eq" && v.j == 2; });
  EXPECT_EQ(it->lhs, s.descriptor.identity());
  EXPECT_EQ(it->rhs, s.descriptor.inverse(s.z));
}

TEST(VerifyFull, WrongOrderOfZ) {
  auto s = construct_strong(2, 3, Variant::H);
  s.n = 9;
  const auto r = verify_full(s);
  EXPECT_TRUE(r.violations.empty());
  EXPECT_FALSE(r.z_order_ok);
  EXPECT_FALSE(r.passed);
}

TEST(VerifyFull, RejectsMalformedShape) {
  auto s = construct_strong(2, 3, Variant::H);
  s.r2.pop_back();
  EXPECT_THROW(verify_full(s), Error);
  s = construct_strong(2, 3, Variant::H);
  s.z.s = 7;
  EXPECT_THROW(verify_class2(s), Error);
}

// verify_full, verify_class2, the pairing predicate and the matrix-model oracle agree.
TEST(Equivalence, RandomTuplesInH5) {
  std::mt19937_64 rng(2024);
  int valid = 0, total = 0;
  for (int i = 0; i < 600; ++i) {
    const auto s = random_tuple(rng, i % 3);
    const bool expected = oracle::is_structure(to_oracle(s, 2), 243);
    const auto full = verify_full(s), c2 = verify_class2(s);
    ASSERT_EQ(full.passed, expected) << i;
    ASSERT_EQ(c2.passed, expected) << i;
    ASSERT_EQ(class2_pairing_predicate(s).passed, expected) << i;
    valid += expected;
    ++total;
  }
  EXPECT_GT(valid, 150);
  EXPECT_LT(valid, total - 150);
}

TEST(Equivalence, DualAndNonStrongAgainstOracle) {
  const auto s = construct_strong(2, 3, Variant::H);
  EXPECT_TRUE(oracle::is_structure(to_oracle(s, 2), 243));
  EXPECT_TRUE(oracle::is_structure(to_oracle(involution_dual(s), 2), 243));
}

TEST(Pairing, StrongReductionIsDuplicatedA) {
  const auto s = construct_strong(2, 3, Variant::H);
  const auto c = class2_pairing_reduction(s);
  const auto& a = s.descriptor.commutator_matrix();
  ASSERT_EQ(c.rows(), 8u);
  for (std::size_t u = 0; u < 8; ++u)
    for (std::size_t v = 0; v < 8; ++v) EXPECT_EQ(c(u, v), a(u % 4, v % 4));
}

TEST(Pairing, AbelianLikeTupleFails) {
  auto s = construct_strong(2, 3, Variant::H);
  for (auto* v : {&s.t1, &s.t2})
    for (auto& g : *v) g = s.descriptor.identity();
  const auto verdict = class2_pairing_predicate(s);
  EXPECT_FALSE(verdict.passed);
  EXPECT_NE(std::find(verdict.failures.begin(), verdict.failures.end(), "surface.1"), verdict.failures.end());
  EXPECT_FALSE(verify_class2(s).passed);
}

TEST(LambdaMu, KnownValues) {
  const auto first = select_lambda_mu(2, 5, SelectMode::first);
  ASSERT_EQ(first.size(), 1u);
  EXPECT_EQ(vec(first[0].lambda.residues()), (std::vector<residue_t>{2, 4}));
  EXPECT_EQ(vec(first[0].mu.residues()), (std::vector<residue_t>{4, 2}));
  EXPECT_TRUE(select_lambda_mu(2, 3, SelectMode::enumerate_all).empty());
  EXPECT_TRUE(select_lambda_mu(2, 2, SelectMode::enumerate_all).empty());
  EXPECT_TRUE(select_lambda_mu(3, 3, SelectMode::first).empty());
  EXPECT_THROW(select_lambda_mu(4, 11, SelectMode::enumerate_all), Error);
}

// Exhaustive search over all (lambda, mu) in Z_p^{2b}, then the determinant against both the
// closed product and a cofactor expansion.
TEST(LambdaMu, EnumerationMatchesBruteForce) {
  for (auto [b, p] : {std::pair<std::size_t, std::int64_t>{2, 5}, {2, 7}, {3, 5}, {2, 11}}) {
    const auto got = select_lambda_mu(b, p, SelectMode::enumerate_all);
    std::set<std::pair<std::vector<residue_t>, std::vector<residue_t>>> expected;
    std::vector<std::int64_t> v(2 * b, 0);
    while (true) {
      std::int64_t sl = 0, sm = 0;
      bool ok = true;
      for (std::size_t j = 0; j < b; ++j) {
        sl += v[j];
        sm += v[b + j];
        if (v[j] == 0 || v[b + j] == 0 || (v[j] * v[b + j]) % p == 1) ok = false;
      }
      if (ok && sl % p == 1 && sm % p == 1)
        expected.insert({std::vector<residue_t>(v.begin(), v.begin() + b), std::vector<residue_t>(v.begin() + b, v.end())});
      std::size_t i = 0;
      while (i < v.size() && ++v[i] == p) v[i++] = 0;
      if (i == v.size()) break;
    }
    std::set<std::pair<std::vector<residue_t>, std::vector<residue_t>>> actual;
    for (const auto& c : got) {
      EXPECT_TRUE(is_valid_choice(c));
      actual.insert({vec(c.lambda.residues()), vec(c.mu.residues())});
    }
    EXPECT_EQ(actual.size(), got.size());
    EXPECT_EQ(actual, expected) << "b=" << b << " p=" << p;
    const auto first = select_lambda_mu(b, p, SelectMode::first);
    ASSERT_EQ(first.size(), 1u);
    EXPECT_TRUE(expected.count({vec(first[0].lambda.residues()), vec(first[0].mu.residues())}));
  }
}

TEST(LambdaMu, DeterminantFormula) {
  for (auto [b, p] : {std::pair<std::size_t, std::int64_t>{2, 5}, {2, 7}, {3, 5}}) {
    int cofactor_checks = 0;
    for (const auto& c : select_lambda_mu(b, p, SelectMode::enumerate_all)) {
      const auto omega = build_omega(c);
      EXPECT_TRUE(omega.is_alternating());
      std::int64_t prod = 1;
      for (std::size_t j = 0; j < b; ++j) {
        const std::int64_t f = oracle::mod(1 - std::int64_t{c.lambda[j].value()} * c.mu[j].value(), p);
        prod = prod * f % p * f % p;
      }
      const auto det = determinant(omega).value();
      EXPECT_EQ(det, static_cast<residue_t>(prod));
      if (b == 2 && cofactor_checks++ < 20) {
        std::vector<std::vector<std::int64_t>> rows;
        for (const auto& r : omega.to_rows()) rows.emplace_back(r.begin(), r.end());
        EXPECT_EQ(det, static_cast<residue_t>(oracle::cofactor_det(rows, p)));
      }
    }
  }
  const PrimeField f(5);
  LambdaMuChoice bad{FieldVector(f, {1, 0}), FieldVector(f, {1, 3})};
  EXPECT_EQ(determinant(build_omega(bad)).value(), 0u);
}

TEST(ConstructNonStrong, KnownValues) {
  for (auto v : {Variant::H, Variant::G}) {
    const auto s = construct_nonstrong(2, 5, v);
    EXPECT_EQ(s.descriptor.order(), 1953125);
    EXPECT_EQ(center_rank(s.descriptor).order, 5);
    const auto r = verify_full(s);
    EXPECT_TRUE(r.passed);
    EXPECT_EQ(r.strength, Strength::non_strong);
    EXPECT_EQ(*r.k1_order, 3125);
    EXPECT_EQ(*r.k2_order, 3125);
  }
  EXPECT_TRUE(verify_full(construct_nonstrong(2, 7, Variant::H)).passed);
  EXPECT_THROW(construct_nonstrong(2, 3, Variant::H), Error);
}

TEST(ConstructNonStrong, EnumeratedSubgroupOrders) {
  const auto s = construct_nonstrong(2, 5, Variant::H);
  VerifyOptions opts;
  opts.subgroup_orders = SubgroupOrderMethod::enumerate;
  const auto r = verify_full(s, opts);
  EXPECT_EQ(*r.k1_order, 3125);
  EXPECT_EQ(*r.k2_order, 3125);
  EXPECT_EQ(r.strength, Strength::non_strong);
  opts.cap = 100;
  const auto capped = verify_full(s, opts);
  EXPECT_FALSE(capped.k1_order.has_value());
  EXPECT_EQ(capped.strength, Strength::unknown);
}

TEST(Involution, SelfInverseAndVerdictPreserving) {
  std::vector<KodairaStructure> all;
  for (auto v : {Variant::H, Variant::G}) {
    all.push_back(construct_strong(2, 3, v));
    all.push_back(construct_strong(4, 5, v));
    all.push_back(construct_nonstrong(2, 5, v));
    all.push_back(construct_nonstrong(3, 7, v));
  }
  std::mt19937_64 rng(5);
  for (int i = 0; i < 60; ++i) all.push_back(random_tuple(rng, i % 3));
  for (const auto& s : all) {
    const auto d = involution_dual(s);
    EXPECT_EQ(involution_dual(d), s);
    const auto rs = verify_full(s), rd = verify_full(d);
    EXPECT_EQ(rs.passed, rd.passed);
    EXPECT_EQ(rs.k1_order, rd.k2_order);
    EXPECT_EQ(rs.k2_order, rd.k1_order);
  }
}

TEST(Json, StructureRoundTrip) {
  for (const auto& s : {construct_strong(2, 3, Variant::G), construct_nonstrong(3, 5, Variant::H)}) {
    const auto text = io::to_json(s).dump();
    EXPECT_EQ(io::structure_from_json(io::parse(text)), s);
  }
}

TEST(Json, SchemaErrors) {
  auto j = io::to_json(construct_strong(2, 3, Variant::H));
  const auto expect_code = [](const io::Json& doc, Errc code) {
    try {
      io::structure_from_json(doc);
      FAIL() << doc.dump();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), code) << e.what();
    }
  };
  auto missing = j;
  missing.erase("z");
  expect_code(missing, Errc::schema_error);
  auto short_list = j;
  short_list["r1"].erase(0);
  expect_code(short_list, Errc::schema_error);
  auto wrong_type = j;
  wrong_type["n"] = "three";
  expect_code(wrong_type, Errc::schema_error);
  auto bad_p = j;
  bad_p["descriptor"]["p"] = 9;
  expect_code(bad_p, Errc::invalid_argument);
  try {
    io::parse("{\"b\": 2,");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::parse_error);
  }
}
