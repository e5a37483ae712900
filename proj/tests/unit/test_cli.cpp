#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "symuniv/cli.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "symuniv");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = symuniv::run_command(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "symuniv_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("usage errors exit 2, help exits 0") {
  CHECK(run({"badcmd"}).code == 2);
  CHECK(run({"lvalue", "--sigma"}).code == 2);
  CHECK(run({"coeffs", "--n", "10"}).code == 2);
  const Run help = run({"--help"});
  CHECK(help.code == 0);
  CHECK(help.out.find("universality") != std::string::npos);
}

TEST_CASE("coeffs writes the cache-format CSV") {
  const fs::path out = scratch("delta.csv");
  const Run r = run({"--cache-dir", "none", "coeffs", "--n", "10", "--out", out.string()});
  REQUIRE(r.code == 0);
  std::ifstream in(out);
  std::string header, row1, row2;
  std::getline(in, header);
  std::getline(in, row1);
  std::getline(in, row2);
  CHECK(header == "n,c_exact,lambda_norm");
  CHECK(row2 == "2,-24,-0.5303300858899106");

  const Run sym2 = run({"--cache-dir", "none", "coeffs", "--n", "10", "--kind", "sym2", "--out", scratch("s2.csv").string()});
  CHECK(sym2.code == 0);
}

TEST_CASE("domain and configuration errors exit 1 with a JSON record") {
  const Run bad = run({"--cache-dir", "none", "coeffs", "--weight", "13", "--n", "10", "--out", scratch("x.csv").string()});
  CHECK(bad.code == 1);
  const json e = json::parse(bad.err);
  CHECK(e["error"] == "invalid-argument");
  CHECK(e["problems"].size() >= 1);

  const Run region = run({"--cache-dir", "none", "lvalue", "--kind", "sym2", "--sigma", "0.6", "--json"});
  CHECK(region.code == 1);
  CHECK(json::parse(region.err)["error"] == "out-of-region");

  const Run both = run({"--cache-dir", "none", "lvalue", "--kind", "sym7", "--mode", "fast"});
  CHECK(both.code == 1);
  CHECK(json::parse(both.err)["problems"].size() == 2);
}

TEST_CASE("lvalue output is deterministic and carries provenance") {
  const std::vector<std::string> args = {"--cache-dir", "none", "--json", "lvalue", "--kind", "sym1", "--sigma", "0.8"};
  const Run a = run(args), b = run(args);
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  const json j = json::parse(a.out);
  CHECK(j["value"]["re"].get<double>() == doctest::Approx(0.82162449665748043).epsilon(1e-6));
  CHECK(j["provenance"]["software"] == "symuniv");
  CHECK(j["provenance"]["weight"] == 12);
  CHECK(j["provenance"]["kind"] == "sym1");

  const Run text = run({"--cache-dir", "none", "lvalue", "--kind", "sym1", "--sigma", "0.8"});
  CHECK(text.code == 0);
  CHECK(text.out.find("abs: ") != std::string::npos);
}

TEST_CASE("subcommands produce their reports") {
  const fs::path cache = scratch("cache");
  const std::string cd = cache.string();

  const Run pnt = run({"--cache-dir", cd, "--json", "pnt", "--m", "1", "--x", "10", "--delta", "0.5"});
  REQUIRE(pnt.code == 0);
  const json p = json::parse(pnt.out);
  CHECK(p["psi"].get<double>() == doctest::Approx(8.08254082618378).epsilon(1e-12));

  const Run univ = run({"--cache-dir", cd, "--json", "universality", "--kind", "sym2", "--target", "const:1.0", "--T",
                        "20", "--dt", "0.5", "--eps", "0.5"});
  REQUIRE(univ.code == 0);
  const json u = json::parse(univ.out);
  CHECK(u["good_set_measure"].get<double>() >= 0.0);
  CHECK(u["good_set_measure"].get<double>() <= 1.0);
  CHECK(u["center"] == 0.85);

  const Run hidden = run({"--cache-dir", cd, "--json", "universality", "--kind", "sym2", "--target", "shift:7.3", "--T",
                          "20", "--dt", "0.05"});
  REQUIRE(hidden.code == 0);
  const json h = json::parse(hidden.out);
  CHECK(std::abs(h["best_t"].get<double>() - 7.3) <= 0.05);
  CHECK(h["best_err"].get<double>() <= 1e-3);

  const Run model = run({"--cache-dir", cd, "--json", "--seed", "3", "random-model", "--kind", "sym2", "--p-max",
                         "1000", "--n-model", "200", "--n-shift", "200", "--T", "100"});
  REQUIRE(model.code == 0);
  const json m = json::parse(model.out);
  CHECK(m["provenance"]["seed"] == 3);
  CHECK(m["ks_abs"].get<double>() <= 1.0);

  const fs::path report = scratch("report.json");
  const Run ms = run({"--cache-dir", cd, "--report", report.string(), "mean-square", "--kind", "sym1", "--sigma", "2",
                      "--T", "100", "--dt", "0.5"});
  REQUIRE(ms.code == 0);
  std::ifstream in(report);
  const json rep = json::parse(in);
  CHECK(rep["ratio"].get<double>() == doctest::Approx(1.0).epsilon(0.01));
}
