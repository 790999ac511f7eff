// Runs the dks executable as a subprocess.

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "dks/json_io.hpp"

namespace fs = std::filesystem;
using dks::io::Json;

namespace {

struct Run {
  int status;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(DKS_CLI_PATH) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return {-1, ""};
  std::string out;
  std::array<char, 4096> buf{};
  while (auto n = fread(buf.data(), 1, buf.size(), pipe)) out.append(buf.data(), n);
  const int raw = pclose(pipe);
  return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, out};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "dks_cli_tests";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST(Cli, KirbyMatchesGolden) {
  const auto r = run("kirby");
  ASSERT_EQ(r.status, 0) << r.out;
  EXPECT_EQ(r.out, slurp(fs::path(DKS_GOLDEN_DIR) / "kirby.json"));
  const auto doc = Json::parse(r.out);
  EXPECT_EQ(doc["invariants"]["sigma"], 144);
  EXPECT_EQ(doc["invariants"]["g1"], 325);
  EXPECT_EQ(doc["invariants"]["g2"], 325);
  EXPECT_EQ(doc["verification"]["strength"], "Strong");
}

TEST(Cli, KirbyOutputVerifies) {
  const auto path = scratch("kirby.json");
  ASSERT_EQ(run("kirby -o " + path.string()).status, 0);
  const auto r = run("verify " + path.string());
  EXPECT_EQ(r.status, 0) << r.out;
  const auto doc = Json::parse(r.out);
  EXPECT_EQ(doc["passed"], true);
  EXPECT_EQ(doc["strength"], "Strong");
}

TEST(Cli, ByteIdenticalReruns) {
  for (const char* args : {"kirby", "slope-table 2 97 --format csv", "lambda-mu 2 7 --all",
                           "feasibility-scan --b-max 4 --denominator-max 30", "heis-check 2 5 --samples 500 --seed 9",
                           "kappa-table 2 20 --format text"}) {
    const auto a = run(args), b = run(args);
    EXPECT_EQ(a.status, 0) << args;
    EXPECT_EQ(a.out, b.out) << args;
  }
}

// Structures are persisted, then read back and verified.
TEST(Cli, ConstructVerifyRoundTrip) {
  const std::vector<std::string> cases{"construct-strong 2 3 H",    "construct-strong 2 3 G",
                                       "construct-strong 3 2 H",    "construct-strong 4 5 G",
                                       "construct-strong 6 7 H",    "construct-nonstrong 2 5 H",
                                       "construct-nonstrong 2 7 G", "construct-nonstrong 3 5 G"};
  int i = 0;
  for (const auto& c : cases) {
    const auto path = scratch("s" + std::to_string(i++) + ".json");
    ASSERT_EQ(run(c + " -o " + path.string()).status, 0) << c;
    for (const char* mode : {"full", "class2"}) {
      const auto r = run("verify " + path.string() + " --mode " + mode);
      EXPECT_EQ(r.status, 0) << c << " " << mode << "\n" << r.out;
      EXPECT_EQ(Json::parse(r.out)["passed"], true);
    }
  }
}

TEST(Cli, VerifyFailureExitsOne) {
  const auto path = scratch("mutated.json");
  ASSERT_EQ(run("construct-strong 2 3 H -o " + path.string()).status, 0);
  auto doc = Json::parse(slurp(path));
  doc["z"]["s"] = 2;
  std::ofstream(path) << doc.dump();
  const auto r = run("verify " + path.string());
  EXPECT_EQ(r.status, 1);
  const auto rep = Json::parse(r.out);
  EXPECT_EQ(rep["passed"], false);
  EXPECT_FALSE(rep["violations"].empty());
}

TEST(Cli, InvalidInputDiagnostics) {
  const auto bad_json = scratch("bad.json");
  std::ofstream(bad_json) << "{\"b\": 2,";
  const auto bad_schema = scratch("schema.json");
  std::ofstream(bad_schema) << "{\"b\": 2}";

  const std::vector<std::pair<std::string, std::string>> cases{
      {"construct-strong 2 5 H", "E_INVALID_ARGUMENT"},
      {"construct-nonstrong 2 3 H", "E_INVALID_ARGUMENT"},
      {"verify " + bad_json.string(), "E_PARSE"},
      {"verify " + bad_schema.string(), "E_SCHEMA"},
      {"verify /nonexistent/file.json", "E_INVALID_ARGUMENT"},
      {"invariants 3^5 2 3 2 1", "E_INCONSISTENT_DATA"},
      {"lambda-mu 4 11 --all", "E_CAP_EXCEEDED"},
      {"feasibility 2 1/0", "E_INVALID_ARGUMENT"},
      {"kirby --format csv", "E_INVALID_ARGUMENT"},
  };
  for (const auto& [args, code] : cases) {
    const auto r = run(args);
    EXPECT_EQ(r.status, 2) << args << "\n" << r.out;
    EXPECT_NE(r.out.find("error[" + code + "]"), std::string::npos) << args << "\n" << r.out;
  }
  EXPECT_EQ(run("").status, 2);
  EXPECT_EQ(run("construct-strong 2 3 X").status, 2);
  EXPECT_EQ(run("--help").status, 0);
}

TEST(Cli, KnownValues) {
  const auto f = run("feasibility 2 1/2");
  EXPECT_EQ(f.status, 0);
  EXPECT_EQ(Json::parse(f.out)["feasible"], false);

  const auto inv = run("invariants 5^9 2 5 5^4 625");
  ASSERT_EQ(inv.status, 0) << inv.out;
  const auto doc = Json::parse(inv.out);
  EXPECT_EQ(doc["invariants"]["slope"], "82/35");
  EXPECT_EQ(doc["invariants"]["b1"], 626);

  const auto csv = run("slope-table 2 13 --format csv");
  EXPECT_EQ(csv.out, "p,slope,sigma,excess\n5,82/35,1250000,1/105\n7,82/35,26353376,1/105\n"
                     "11,103/44,1558973680,1/132\n13,578/247,7027833904,5/741\n");

  const auto text = run("feasibility 2 12/35 --format text");
  EXPECT_NE(text.out.find("admissible_n: 5 7\n"), std::string::npos) << text.out;
}

TEST(Cli, LargeValuesAreDecimalStrings) {
  const auto r = run("invariants 7^40 3 7 1 1");
  ASSERT_EQ(r.status, 0) << r.out;
  const auto doc = Json::parse(r.out);
  ASSERT_TRUE(doc["input"]["group_order"].is_string());
  EXPECT_EQ(dks::BigInt(doc["input"]["group_order"].get<std::string>()), dks::ipow(dks::BigInt(7), 40));
}

TEST(Cli, ClassifyDescriptor) {
  const auto path = scratch("classify.json");
  ASSERT_EQ(run("construct-nonstrong 2 5 G -o " + path.string()).status, 0);
  const auto r = run("classify " + path.string());
  ASSERT_EQ(r.status, 0) << r.out;
  const auto doc = Json::parse(r.out);
  EXPECT_EQ(doc["center_order"], 5);
  EXPECT_EQ(doc["class"], dks::to_string(dks::ExtraSpecialClass::exponent_p_squared));
}
