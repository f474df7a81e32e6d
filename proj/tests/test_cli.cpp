#include <cstdlib>
#include <filesystem>
#include <limits>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "oracle.hpp"
#include "shortfall/choquet.hpp"
#include "shortfall/cli.hpp"
#include "shortfall/heavy_tail.hpp"

using namespace shortfall;
using doctest::Approx;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string write_temp(const std::string& name, const std::string& text) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path, std::ios::binary) << text;
  return path.string();
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

}  // namespace

TEST_CASE("table2 as csv") {
  const auto r = run({"table2", "--format", "csv"});
  REQUIRE(r.code == kExitOk);
  const auto rows = lines(r.out);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0] == "alpha,tau,cvar_f0,gamma_2,gamma_3,gamma_4,gamma_5,gamma_inf");
  CHECK(rows[1].rfind("0.9,2.706,4.393,1.687,3.04,", 0) == 0);
  CHECK(r.out.find('\r') == std::string::npos);
}

TEST_CASE("estimate on 1..10") {
  const auto path = write_temp("shortfall_tiny.csv", "1\n2\n3\n4\n5\n6\n7\n8\n9\n10\n");
  const auto r = run({"estimate", "--alpha", "0.8", "--input", path});
  REQUIRE(r.code == kExitOk);
  CHECK(lines(r.out).at(1).rfind("9.5,empirical_cvar,0.8,", 0) == 0);
  const auto tail = run({"estimate", "--tail-mass", "0.2", "--input", path});
  CHECK(tail.out == r.out);
  const auto literal = run({"estimate", "--alpha", "0.8", "--literal", "--input", path});
  CHECK(lines(literal.out).at(1).rfind("27,empirical_cvar_literal", 0) == 0);
}

TEST_CASE("strict mode requires the header") {
  const auto bare = write_temp("shortfall_bare.csv", "1\n2\n");
  const auto headed = write_temp("shortfall_headed.csv", "loss\r\n1\r\n2\r\n");
  CHECK(run({"estimate", "--alpha", "0.5", "--input", bare}).code == kExitOk);
  const auto strict = run({"estimate", "--alpha", "0.5", "--strict", "--input", bare});
  CHECK(strict.code == kExitDomain);
  CHECK(strict.err.find("line 1") != std::string::npos);
  CHECK(run({"estimate", "--alpha", "0.5", "--strict", "--input", headed}).code ==
        kExitOk);
}

TEST_CASE("malformed input reports the line") {
  const auto path = write_temp("shortfall_bad.csv", "loss\n1.5\n\n2,3\n");
  const auto r = run({"estimate", "--alpha", "0.5", "--input", path});
  CHECK(r.code == kExitDomain);
  CHECK(r.err.find("line 4") != std::string::npos);
  std::istringstream in("loss\n1\nabc\n");
  try {
    read_loss_csv(in, false);
    FAIL("no exception");
  } catch (const InputError& e) {
    CHECK(e.line() == 3);
  }
  const auto missing = run({"estimate", "--alpha", "0.5", "--input", "/nonexistent/x.csv"});
  CHECK(missing.code == kExitDomain);
}

TEST_CASE("usage errors exit with 64") {
  CHECK(run({"table2", "--bogus"}).code == kExitUsage);
  CHECK(run({}).code == kExitUsage);
  CHECK(run({"frobnicate"}).code == kExitUsage);
  CHECK(run({"table3", "--alpha", "0.9", "--tail-mass", "0.1"}).code == kExitUsage);
  CHECK(run({"estimate", "--alpha", "0.9"}).code == kExitUsage);  // no --input
  const auto path = write_temp("shortfall_one.csv", "1\n");
  CHECK(run({"estimate", "--input", path}).code == kExitUsage);  // no level
  CHECK(run({"table2", "--format", "xml"}).code == kExitUsage);
  CHECK(run({"--help"}).code == kExitOk);
}

TEST_CASE("domain errors exit with 2") {
  CHECK(run({"table2", "--gammas", "0.5"}).code == kExitDomain);
  CHECK(run({"table3", "--alpha", "1.5"}).code == kExitDomain);
  CHECK(run({"table3", "--epsilons", "2"}).code == kExitDomain);
  CHECK(run({"--rel-tol", "0", "table2"}).code == kExitDomain);
}

TEST_CASE("json output round-trips every value") {
  const auto r = run({"table3", "--format", "json"});
  REQUIRE(r.code == kExitOk);
  const auto doc = nlohmann::json::parse(r.out);
  REQUIRE(doc.size() == 5);
  const auto base = std::make_shared<ChiSquareLaw>(1);
  const double eps[] = {0.0, 0.01, 0.1, 0.2, 0.3};
  const double gammas[] = {1.5, 2.0, 3.0, 5.0, std::numeric_limits<double>::infinity()};
  const char* keys[] = {"gamma_1.5", "gamma_2", "gamma_3", "gamma_5", "gamma_inf"};
  for (int i = 0; i < 5; ++i) {
    CHECK(doc[i]["epsilon"].get<double>() == eps[i]);
    for (int j = 0; j < 5; ++j) {
      const HuberMixtureModel h(SplicedParetoModel(base, gammas[j], 0.96), eps[i]);
      CHECK(doc[i][keys[j]].get<double>() == theorem3_cvar(h).value);
    }
  }
  const auto c = run({"--format", "json", "choquet", "--law", "normal", "--alpha", "0.96"});
  const auto reports = nlohmann::json::parse(c.out);
  CHECK(reports[1]["value"].get<double>() ==
        cvar_quantile_integral(NormalLaw(), 0.96).value);
  CHECK(reports[1]["value"].get<double>() == Approx(oracle::kNormalCvar96).epsilon(1e-10));
}

TEST_CASE("identical runs give identical bytes") {
  const std::vector<std::string> args{"simulate", "--n", "3000", "--seed", "42",
                                      "--replicates", "2", "--v-law", "uniform"};
  const auto a = run(args);
  const auto b = run(args);
  REQUIRE(a.code == kExitOk);
  CHECK(a.out == b.out);
  CHECK(lines(a.out).size() == 1 + 5 * 2);
  auto other = args;
  other[4] = "43";
  CHECK(run(other).out != a.out);
}

TEST_CASE("format selection") {
  const auto md = run({"--markdown", "table2"});
  CHECK(md.out.rfind("| alpha | tau |", 0) == 0);
  CHECK(lines(md.out).at(1).rfind("|---|", 0) == 0);
  setenv(kFormatEnv, "json", 1);
  const auto env = run({"table2"});
  CHECK(env.out.front() == '[');
  const auto flag = run({"table2", "--format", "csv"});
  CHECK(flag.out.rfind("alpha,", 0) == 0);
  setenv(kFormatEnv, "yaml", 1);
  CHECK(run({"table2"}).code == kExitUsage);
  unsetenv(kFormatEnv);
  const auto digits = run({"--digits", "8", "table2"});
  CHECK(lines(digits.out).at(1).rfind("0.9,2.7055435,4.3928606,", 0) == 0);
}

TEST_CASE("table1 on a reduced box") {
  const auto r = run({"table1", "--deltas", "0.1", "--kappas", "1.1"});
  REQUIRE(r.code == kExitOk);
  CHECK(lines(r.out).at(0) == "Delta,K_1.1");
  CHECK(lines(r.out).at(1) == "0.1,2.256");
}

TEST_CASE("choquet command") {
  const auto r = run({"choquet", "--law", "chi2", "--df", "1", "--tail-mass", "0.1"});
  REQUIRE(r.code == kExitOk);
  CHECK(lines(r.out).at(1).rfind("4.393,choquet_expected_loss", 0) == 0);
  const auto mean = run({"choquet", "--law", "uniform", "--lower", "2", "--upper",
                         "4", "--distortion", "identity"});
  CHECK(lines(mean.out).at(1).rfind("3,choquet_expected_loss", 0) == 0);
}
