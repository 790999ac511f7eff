// dks: build, verify and tabulate diagonal double Kodaira structures.
//
// Exit status: 0 success, 1 verification failure, 2 invalid input (diagnostic on stderr as
// "error[CODE]: message").

#include <cctype>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dks/dks.hpp"

namespace {

using dks::BigInt;
using dks::BigRational;
using dks::Errc;
using dks::Error;
using dks::io::Json;

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitInvalid = 2;

struct Outcome {
  Outcome(Json d, std::optional<std::string> c = std::nullopt, int st = kExitOk)
      : doc(std::move(d)), csv(std::move(c)), status(st) {}
  Json doc;
  std::optional<std::string> csv;  // only table-shaped commands provide one
  int status;
};

dks::Variant parse_variant(const std::string& v) { return v == "G" ? dks::Variant::G : dks::Variant::H; }

// Decimal integer, optionally written as base^exponent.
BigInt parse_big(const std::string& text) {
  const auto caret = text.find('^');
  const auto digits = [&](const std::string& s) {
    if (s.empty() || !std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); }))
      throw Error(Errc::invalid_argument, "not a non-negative integer: \"" + text + "\"");
    return BigInt(s);
  };
  if (caret == std::string::npos) return digits(text);
  const BigInt base = digits(text.substr(0, caret));
  const BigInt exp = digits(text.substr(caret + 1));
  if (exp > 100000) throw Error(Errc::invalid_argument, "exponent too large: " + text);
  return dks::ipow(base, static_cast<std::uint64_t>(exp));
}

BigRational parse_rational(const std::string& text) {
  const auto slash = text.find('/');
  if (slash == std::string::npos) return BigRational(parse_big(text));
  const BigInt den = parse_big(text.substr(slash + 1));
  if (den == 0) throw Error(Errc::invalid_argument, "zero denominator in \"" + text + "\"");
  return BigRational(parse_big(text.substr(0, slash)), den);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::invalid_argument, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Flat "path: value" rendering for --format text.
void render_text(const Json& j, const std::string& path, std::ostream& os) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) render_text(v, path.empty() ? k : path + "." + k, os);
  } else if (j.is_array() && std::all_of(j.begin(), j.end(), [](const Json& e) { return e.is_primitive(); })) {
    os << path << ":";
    for (const auto& e : j) os << " " << (e.is_string() ? e.get<std::string>() : e.dump());
    os << "\n";
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) render_text(j[i], path + "[" + std::to_string(i) + "]", os);
  } else {
    os << path << ": " << (j.is_string() ? j.get<std::string>() : j.dump()) << "\n";
  }
}

std::string join(const Json& arr, const char* sep) {
  std::string out;
  for (const auto& e : arr) {
    if (!out.empty()) out += sep;
    out += e.is_string() ? e.get<std::string>() : e.dump();
  }
  return out;
}

Json lambda_mu_entry(const dks::LambdaMuChoice& c) {
  const auto det = dks::determinant(dks::build_omega(c));
  dks::FieldElement product(c.lambda.field(), 1);
  for (std::size_t j = 0; j < c.lambda.size(); ++j) {
    const auto f = dks::FieldElement(c.lambda.field(), 1) - c.lambda[j] * c.mu[j];
    product *= f * f;
  }
  auto out = dks::io::to_json(c);
  out["det_omega"] = det.value();
  out["product_formula"] = product.value();
  return out;
}

Outcome kirby_certificate(dks::Variant variant) {
  const auto s = dks::construct_strong(2, 3, variant);
  const auto rep = dks::verify_full(s);
  const BigInt order = s.descriptor.order();
  const auto inv = dks::compute_invariants({order, 2, 3, order / *rep.k1_order, order / *rep.k2_order});
  Json doc{{"structure", dks::io::to_json(s)},
           {"verification", dks::io::to_json(rep)},
           {"invariants", dks::io::to_json(inv)}};
  return {doc, std::nullopt, rep.passed ? kExitOk : kExitFailed};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dks: diagonal double Kodaira structures on extra-special p-groups"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string output;
  std::string format = "json";
  std::uint64_t seed = 20200101;
  app.add_option("-o,--output", output, "Write the result to this file instead of stdout");
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "csv", "text"}));
  app.add_option("--seed", seed, "Seed for randomized checks");

  std::function<Outcome()> action;

  // construct-strong / construct-nonstrong
  std::uint64_t cb = 0;
  std::int64_t cp = 0;
  std::string cvariant = "H";
  for (const char* name : {"construct-strong", "construct-nonstrong"}) {
    const bool strong = std::string(name) == "construct-strong";
    auto* sub = app.add_subcommand(name, strong ? "Strong-type structure (needs p | b+1)"
                                                : "Non-strong structure on H/G(Omega_b) (needs p >= 5)");
    sub->add_option("b", cb)->required();
    sub->add_option("p", cp)->required();
    sub->add_option("variant", cvariant)->required()->check(CLI::IsMember({"H", "G"}));
    sub->callback([&, strong] {
      action = [&, strong] {
        const auto s = strong ? dks::construct_strong(cb, cp, parse_variant(cvariant))
                              : dks::construct_nonstrong(cb, cp, parse_variant(cvariant));
        return Outcome{dks::io::to_json(s)};
      };
    });
  }

  // verify
  std::string verify_path;
  std::string verify_mode = "full";
  bool verify_enumerate = false;
  std::uint64_t verify_cap = dks::default_closure_cap;
  auto* verify = app.add_subcommand("verify", "Check a structure file against the defining relations");
  verify->add_option("structure", verify_path)->required();
  verify->add_option("--mode", verify_mode)->check(CLI::IsMember({"full", "class2"}));
  verify->add_flag("--enumerate", verify_enumerate, "Measure K_1, K_2 by enumeration instead of the span formula");
  verify->add_option("--cap", verify_cap, "Enumeration cap");
  verify->callback([&] {
    action = [&] {
      const auto doc = dks::io::parse(read_file(verify_path));
      const auto& body = doc.is_object() && doc.contains("structure") ? doc["structure"] : doc;
      const auto s = dks::io::structure_from_json(body);
      dks::VerifyOptions opts;
      opts.cap = verify_cap;
      if (verify_enumerate) opts.subgroup_orders = dks::SubgroupOrderMethod::enumerate;
      const auto rep = dks::verify(s, verify_mode == "full" ? dks::VerifyMode::full : dks::VerifyMode::class2, opts);
      return Outcome{dks::io::to_json(rep), std::nullopt, rep.passed ? kExitOk : kExitFailed};
    };
  });

  // invariants
  std::string inv_order, inv_m1, inv_m2;
  std::uint64_t inv_b = 0, inv_n = 0;
  bool inv_formal = false;
  auto* invariants = app.add_subcommand("invariants", "Invariants of the associated fibration");
  invariants->add_option("group_order", inv_order, "|G|, decimal or base^exp")->required();
  invariants->add_option("b", inv_b)->required();
  invariants->add_option("n", inv_n)->required();
  invariants->add_option("m1", inv_m1)->required();
  invariants->add_option("m2", inv_m2)->required();
  invariants->add_flag("--formal", inv_formal, "Allow the formal value n = 1");
  invariants->callback([&] {
    action = [&] {
      const dks::FibrationData d{parse_big(inv_order), inv_b, inv_n, parse_big(inv_m1), parse_big(inv_m2)};
      const auto inv = dks::compute_invariants(d, {inv_formal});
      Json doc{{"input", Json{{"group_order", dks::io::big(d.group_order)}, {"b", d.b}, {"n", d.n},
                              {"m1", dks::io::big(d.m1)}, {"m2", dks::io::big(d.m2)}}},
               {"invariants", dks::io::to_json(inv)}};
      return Outcome{doc};
    };
  });

  // slope-table
  std::uint64_t st_b = 2, st_pmax = 97;
  auto* slope = app.add_subcommand("slope-table", "Slopes of the non-strong family for primes 5..p_max");
  slope->add_option("b", st_b)->required();
  slope->add_option("p_max", st_pmax)->required();
  slope->callback([&] {
    action = [&] {
      const auto t = dks::slope_table(st_b, dks::primes_in_range(5, st_pmax));
      const auto doc = dks::io::to_json(t);
      std::string csv = "p,slope,sigma,excess\n";
      for (const auto& r : doc["rows"])
        csv += r["p"].dump() + "," + r["slope"].get<std::string>() + "," + r["sigma"].dump() + "," +
               r["excess"].get<std::string>() + "\n";
      return Outcome{doc, csv};
    };
  });

  // feasibility / feasibility-scan
  std::uint64_t fb = 2;
  std::string fs;
  auto* feas = app.add_subcommand("feasibility", "Can slope 2+s arise from a structure with genus b?");
  feas->add_option("b", fb)->required();
  feas->add_option("s", fs, "Rational u/v")->required();
  feas->callback([&] {
    action = [&] { return Outcome{dks::io::to_json(dks::feasibility_check(fb, parse_rational(fs)))}; };
  });

  std::uint64_t scan_b = 6, scan_den = 50;
  auto* scan = app.add_subcommand("feasibility-scan", "All feasible slopes 2+u/v with bounded b and v");
  scan->add_option("--b-max", scan_b);
  scan->add_option("--denominator-max", scan_den);
  scan->callback([&] {
    action = [&] {
      Json rows = Json::array();
      std::string csv = "b,s,admissible_n,discriminant,below_bound\n";
      for (const auto& v : dks::feasibility_scan(scan_b, scan_den)) {
        auto j = dks::io::to_json(v);
        csv += j["b"].dump() + "," + j["s"].get<std::string>() + "," + join(j["admissible_n"], " ") + "," +
               j["discriminant"].get<std::string>() + "," + j["below_bound"].dump() + "\n";
        rows.push_back(std::move(j));
      }
      return Outcome{Json{{"b_max", scan_b}, {"denominator_max", scan_den}, {"rows", rows}}, csv};
    };
  });

  // lambda-mu
  std::uint64_t lm_b = 2;
  std::int64_t lm_p = 5;
  bool lm_all = false;
  auto* lm = app.add_subcommand("lambda-mu", "Admissible lambda/mu choices and det(Omega_b)");
  lm->add_option("b", lm_b)->required();
  lm->add_option("p", lm_p)->required();
  lm->add_flag("--all", lm_all, "Enumerate every choice (p^{2b} <= 10^6)");
  lm->callback([&] {
    action = [&] {
      const auto choices = dks::select_lambda_mu(lm_b, lm_p, lm_all ? dks::SelectMode::enumerate_all
                                                                      : dks::SelectMode::first);
      Json arr = Json::array();
      std::string csv = "lambda,mu,det_omega,product_formula\n";
      for (const auto& c : choices) {
        auto e = lambda_mu_entry(c);
        csv += join(e["lambda"], " ") + "," + join(e["mu"], " ") + "," + e["det_omega"].dump() + "," +
               e["product_formula"].dump() + "\n";
        arr.push_back(std::move(e));
      }
      Json doc{{"b", lm_b}, {"p", lm_p}, {"mode", lm_all ? "enumerate_all" : "first"},
               {"count", choices.size()}, {"choices", arr}};
      return Outcome{doc, csv};
    };
  });

  // kappa-table
  std::uint64_t kb_min = 2, kb_max = 20;
  bool k_verify = false;
  auto* kappa = app.add_subcommand("kappa-table", "Prime divisors of b+1 and the signatures they realize");
  kappa->add_option("b_min", kb_min)->required();
  kappa->add_option("b_max", kb_max)->required();
  kappa->add_flag("--verify", k_verify, "Construct and verify every strong structure");
  kappa->callback([&] {
    action = [&] {
      Json rows = Json::array();
      std::string csv = "b,omega,primes,signatures,signatures_distinct\n";
      for (const auto& r : dks::kappa_lower_bound_table(kb_min, kb_max, k_verify)) {
        auto j = dks::io::to_json(r);
        csv += j["b"].dump() + "," + j["omega"].dump() + "," + join(j["primes"], " ") + "," +
               join(j["signatures"], " ") + "," + j["signatures_distinct"].dump() + "\n";
        rows.push_back(std::move(j));
      }
      return Outcome{Json{{"rows", rows}}, csv};
    };
  });

  // kirby
  std::string kirby_variant = "H";
  auto* kirby = app.add_subcommand("kirby", "Strong (2,3) structure on a group of order 3^5 and its invariants");
  kirby->add_option("--variant", kirby_variant)->check(CLI::IsMember({"H", "G"}));
  kirby->callback([&] { action = [&] { return kirby_certificate(parse_variant(kirby_variant)); }; });

  // heis-check
  std::uint64_t hb = 2, hsamples = 10000;
  std::int64_t hp = 3;
  auto* heis = app.add_subcommand("heis-check", "Compare collection arithmetic with the matrix Heisenberg model");
  heis->add_option("b", hb)->required();
  heis->add_option("p", hp)->required();
  heis->add_option("--samples", hsamples);
  heis->callback([&] {
    action = [&] {
      const auto d = dks::GroupDescriptor::extra_special(hb, hp, dks::Variant::H);
      const bool ok = dks::heis_oracle_check(d, hsamples, seed);
      Json doc{{"b", hb}, {"p", hp}, {"exhaustive", d.order() <= 243}, {"samples", hsamples},
               {"seed", seed}, {"passed", ok}};
      return Outcome{doc, std::nullopt, ok ? kExitOk : kExitFailed};
    };
  });

  // classify
  std::string classify_path;
  auto* classify = app.add_subcommand("classify", "Center and extra-special type of a descriptor file");
  classify->add_option("descriptor", classify_path)->required();
  classify->callback([&] {
    action = [&] {
      const auto doc = dks::io::parse(read_file(classify_path));
      const auto& body = doc.is_object() && doc.contains("descriptor") ? doc["descriptor"] : doc;
      const auto d = dks::io::descriptor_from_json(body);
      const auto c = dks::center_rank(d);
      return Outcome{Json{{"order", dks::io::big(d.order())},
                          {"center_order", dks::io::big(c.order)},
                          {"center_cyclic_of_order_p", c.cyclic_of_order_p},
                          {"class", dks::to_string(dks::classify_extra_special(d))}}};
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInvalid;
  }

  try {
    Outcome out = action();
    std::string text;
    if (format == "json") {
      text = out.doc.dump(2) + "\n";
    } else if (format == "csv") {
      if (!out.csv) throw Error(Errc::invalid_argument, "this command has no CSV form");
      text = *out.csv;
    } else {
      std::ostringstream os;
      render_text(out.doc, "", os);
      text = os.str();
    }
    if (output.empty()) {
      std::cout << text;
    } else {
      std::ofstream f(output, std::ios::binary);
      if (!f) throw Error(Errc::invalid_argument, "cannot write " + output);
      f << text;
    }
    return out.status;
  } catch (const Error& e) {
    std::cerr << "error[" << dks::diagnostic_code(e.code()) << "]: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error[E_INTERNAL]: " << e.what() << "\n";
    return kExitInvalid;
  }
}
