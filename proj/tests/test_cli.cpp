#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "quadham/cli.hpp"

using nlohmann::json;
namespace fs = std::filesystem;
namespace cli = quadham::cli;

namespace {

const fs::path kData = fs::path(QUADHAM_GOLDEN_DIR).parent_path() / "data";

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args, std::optional<std::string> tol_scale = {}) {
  std::ostringstream out, err;
  cli::Environment env;
  env.tolerance_scale = std::move(tol_scale);
  const int code = cli::run(args, out, err, env);
  return {code, out.str(), err.str()};
}

std::string config(const std::string& name) { return (kData / name).string(); }

std::string read(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Set QUADHAM_UPDATE_GOLDEN=1 to rewrite the files after an intended change.
void check_golden(const std::string& name, const std::string& text) {
  const fs::path p = fs::path(QUADHAM_GOLDEN_DIR) / name;
  if (std::getenv("QUADHAM_UPDATE_GOLDEN")) {
    std::ofstream(p) << text;
  }
  REQUIRE(fs::exists(p));
  CHECK(read(p) == text);
}

json results_of(const Result& r) {
  REQUIRE(r.code == 0);
  return json::parse(r.out).at("results");
}

int shell(const std::string& command) {
  const int status = std::system(command.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("analyze") {
  const Result b1 = run({"analyze", "--config", config("b1.json")});
  check_golden("analyze_b1.json", b1.out);
  const json r1 = results_of(b1);
  CHECK(r1.at("classification") == "BoundedBelowDiscrete");
  CHECK(r1.at("ground_energy").get<double>() == doctest::Approx(2.0));
  auto ev = r1.at("eigenvalues").at("real").get<std::vector<double>>();
  std::sort(ev.begin(), ev.end());
  CHECK(ev[0] == doctest::Approx(-3.0));
  CHECK(ev[1] == doctest::Approx(-1.0));
  CHECK(ev[2] == doctest::Approx(1.0));
  CHECK(ev[3] == doctest::Approx(3.0));
  CHECK(r1.at("adjoint_matrix").at("imag")[0][1].get<double>() == -1.0);

  const Result b2 = run({"analyze", "--config", config("b2.json")});
  check_golden("analyze_b2.json", b2.out);
  CHECK(results_of(b2).at("classification") == "CriticalInfiniteMultiplicity");

  const Result k1 = run({"analyze", "--config", config("k1.json")});
  check_golden("analyze_k1.json", k1.out);
  const json rk = results_of(k1);
  CHECK(rk.at("ground_energy").get<double>() == doctest::Approx(1.0));
  CHECK(rk.at("eigenvalues").at("real").get<std::vector<double>>() == std::vector<double>{-2, 2});

  const json rp = results_of(run({"analyze", "--config", config("physical.json")}));
  CHECK(rp.at("dimensionless").at("mu").get<double>() == 2.0);
  CHECK(rp.at("dimensionless").at("k").get<double>() == 0.25);
  CHECK(rp.at("dimensionless").at("b").get<double>() == 2.0);
}

TEST_CASE("spectrum") {
  const Result b1 = run({"spectrum", "--config", config("b1.json"), "--max-quanta", "3"});
  check_golden("spectrum_b1.csv", b1.out);
  CHECK(b1.out.rfind("n1,n2,energy,degeneracy\n0,0,2.000000000e+00,1\n0,1,3.000000000e+00,1\n", 0) == 0);
  CHECK(b1.out.find("0,3,5.000000000e+00,2\n1,0,5.000000000e+00,2\n") != std::string::npos);

  const Result b0 = run({"spectrum", "--config", config("b0.json"), "--max-quanta", "1"});
  check_golden("spectrum_b0.csv", b0.out);
  CHECK(b0.out ==
        "n1,n2,energy,degeneracy\n0,0,2.000000000e+00,1\n0,1,4.000000000e+00,2\n1,0,4.000000000e+00,2\n");

  const Result sb = run({"spectrum", "--config", config("sb2.json"), "--max-quanta", "2"});
  check_golden("spectrum_sb2.csv", sb.out);
  CHECK(sb.out ==
        "n1,n2,energy,degeneracy\n0,0,2.000000000e+00,inf\n1,0,6.000000000e+00,inf\n2,0,1.000000000e+01,inf\n");

  const json j = results_of(run({"spectrum", "--config", config("b1.json"), "--format", "json"}));
  CHECK(j.at("levels").size() == 10);
}

TEST_CASE("scan") {
  const Result a = run({"scan", "--config", config("b1.json"), "--from", "0", "--to", "4", "--steps", "81"});
  check_golden("scan_0_4.json", a.out);
  const json ra = results_of(a);
  REQUIRE(ra.at("transitions").size() == 1);
  CHECK(std::abs(ra.at("transitions")[0].at("b").get<double>() - 2.0) <= 1e-10);
  CHECK(ra.at("samples").size() == 81);

  const Result b = run({"scan", "--config", config("b1.json"), "--from", "-3", "--to", "3"});
  check_golden("scan_m3_3.json", b.out);
  const json rb = results_of(b);
  REQUIRE(rb.at("transitions").size() == 2);
  CHECK(std::abs(rb.at("transitions")[0].at("b").get<double>() + 2.0) <= 1e-10);
  CHECK(std::abs(rb.at("transitions")[1].at("b").get<double>() - 2.0) <= 1e-10);

  const Result c = run({"scan", "--config", config("b1.json"), "--from", "0", "--to", "1", "--steps", "11"});
  check_golden("scan_0_1.json", c.out);
  CHECK(results_of(c).at("transitions").empty());

  const Result csv = run({"scan", "--config", config("b1.json"), "--from", "0", "--to", "4", "--steps", "5",
                          "--format", "csv"});
  CHECK(csv.out.rfind("b,classification,gamma_min,ground_energy\n", 0) == 0);
  CHECK(csv.out.find("2.000000000e+00,CriticalInfiniteMultiplicity") != std::string::npos);
}

TEST_CASE("verify") {
  const Result b1 = run({"verify", "--config", config("b1.json"), "--n-max", "6"});
  check_golden("verify_b1.json", b1.out);
  const json r1 = results_of(b1);
  CHECK(r1.at("status") == "PASS");
  CHECK(r1.at("max_abs_diff").get<double>() <= 1e-8);

  const Result b2 = run({"verify", "--config", config("b2.json"), "--n-max", "8"});
  check_golden("verify_b2.json", b2.out);
  const json r2 = results_of(b2);
  CHECK(r2.at("status") == "PASS");
  CHECK(r2.at("vacuum_multiplicity") == 9);

  const Result seed = run({"verify", "--seed", "42", "--n-max", "20"});
  check_golden("verify_seed42.json", seed.out);
  const json rs = results_of(seed);
  CHECK(rs.at("status") == "PASS");
  CHECK(rs.at("lowest_10_max_abs_diff").get<double>() <= 1e-6);

  const Result same = run({"verify", "--config", config("random42.json"), "--n-max", "20"});
  CHECK(results_of(same) == rs);

  const Result fallback = run({"verify", "--config", config("random42.json")});
  CHECK(results_of(fallback) == rs);
  CHECK(results_of(run({"verify", "--config", config("b1.json")})).at("n_max") == 8);
  for (const char* s : {"3", "7", "11"}) {
    const json r = results_of(run({"verify", "--seed", s}));
    CHECK(r.at("n_max") == 20);
    CHECK(r.at("status") == "PASS");
  }
}

TEST_CASE("wavefunction") {
  const Result w11 = run({"wavefunction", "--config", config("b1.json"), "--m", "1", "--n", "1"});
  check_golden("wavefunction_11.json", w11.out);
  const json r11 = results_of(w11);
  CHECK(r11.at("polynomial") == "(1 − x² − y²)/√π · exp(−(x²+y²)/2)");
  CHECK(r11.at("energy").at("exact") == "6");
  CHECK(r11.at("h0").at("exact") == "6");
  CHECK(r11.at("lz").at("exact") == "0");

  const Result w00 = run({"wavefunction", "--config", config("b1.json")});
  check_golden("wavefunction_00.json", w00.out);
  CHECK(results_of(w00).at("polynomial") == "1/√π · exp(−(x²+y²)/2)");

  const Result w01 = run({"wavefunction", "--config", config("b1.json"), "--m", "0", "--n", "1"});
  check_golden("wavefunction_01.json", w01.out);
  CHECK(results_of(w01).at("polynomial") == "(y + ix)/√π · exp(−(x²+y²)/2)");
  CHECK(results_of(w01).at("lz").at("exact") == "-1");

  CHECK(run({"wavefunction", "--config", config("random42.json")}).code == cli::kConfigError);
}

TEST_CASE("determinism and envelope") {
  const Result a = run({"analyze", "--config", config("b1.json")});
  const Result b = run({"analyze", "--config", config("b1.json")});
  CHECK(a.out == b.out);
  const json env = json::parse(a.out);
  CHECK(env.at("tool") == "quadham");
  CHECK(env.at("version") == cli::kVersion);
  CHECK(env.at("command") == "analyze");
  CHECK(env.at("config").at("model").at("preset") == "oscillator-b");
  CHECK(env.contains("timestamp"));

  const fs::path out = fs::temp_directory_path() / "quadham_cli_out.json";
  CHECK(run({"analyze", "--config", config("b1.json"), "--out", out.string()}).out.empty());
  CHECK(read(out) == a.out);
  fs::remove(out);
}

TEST_CASE("config errors exit with 2") {
  CHECK(run({"analyze"}).code == cli::kConfigError);
  CHECK(run({"analyze", "--config", config("missing.json")}).code == cli::kConfigError);
  CHECK(run({"bogus"}).code == cli::kConfigError);
  CHECK(run({"analyze", "--config", config("b1.json"), "--format", "xml"}).code == cli::kConfigError);
  CHECK(run({"analyze", "--config", config("b1.json"), "--format", "csv"}).code == cli::kConfigError);
  CHECK(run({"analyze", "--config", config("b1.json")}, std::string("abc")).code == cli::kConfigError);
  CHECK(run({"analyze", "--config", config("b1.json")}, std::string("-1")).code == cli::kConfigError);
  CHECK(run({"analyze", "--config", config("b1.json")}, std::string("10")).code == cli::kSuccess);
  CHECK(run({"scan", "--config", config("k1.json"), "--from", "0", "--to", "1"}).code == cli::kConfigError);
  CHECK(run({"scan", "--config", config("b1.json")}).code == cli::kConfigError);
  CHECK(run({"analyze", "--config", config("b1.json"), "--seed", "3"}).code == cli::kConfigError);

  CHECK_THROWS_AS(cli::parse_config("not json"), cli::ConfigError);
  CHECK_THROWS_AS(cli::parse_config("[]"), cli::ConfigError);
  CHECK_THROWS_AS(cli::parse_config(R"({"model": {"preset": "sb"}, "extra": 1})"), cli::ConfigError);
  CHECK_THROWS_AS(cli::parse_config(R"({"model": {"preset": "sb", "K": 1, "gamma": []}})"), cli::ConfigError);
  CHECK_THROWS_AS(cli::parse_config(R"({"model": {}})"), cli::ConfigError);
  CHECK_THROWS_AS(cli::parse_config(R"({"model": {"preset": "sb"}, "options": {"n_max": -1}})"),
                  cli::ConfigError);
  CHECK_THROWS_AS(cli::parse_config(R"({"model": {"preset": "sb"}, "options": {"colour": 1}})"),
                  cli::ConfigError);

  auto model = [](const std::string& text) { return cli::model_from_config(json::parse(text)); };
  CHECK_THROWS_AS(model(R"({"K": 1, "gamma": [[1, 0, 0], [0, 1, 0]]})"), cli::ConfigError);
  CHECK_THROWS_AS(model(R"({"K": 1, "gamma": [[1, 0.5], [0, 1]]})"), cli::ConfigError);
  CHECK_THROWS_AS(model(R"({"K": 1, "gamma": [[1, "a"], [0, 1]]})"), cli::ConfigError);
  CHECK_THROWS_AS(model(R"({"preset": "nope"})"), cli::ConfigError);
  CHECK_THROWS_AS(model(R"({"preset": "oscillator-b", "params": {"mu": 1}})"), cli::ConfigError);
  CHECK_THROWS_AS(model(R"({"preset": "oscillator-b", "params": {"b": 1, "mu": 0}})"), cli::ConfigError);
  CHECK_THROWS_AS(model(R"({"preset": "sb", "params": {"B": 1, "C": 2}})"), cli::ConfigError);
  const auto xy = model(R"({"K": 2, "gamma": [[1, 1, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]})");
  CHECK(xy.gamma()(0, 1) == 0.5);
  CHECK(xy.gamma()(1, 0) == 0.5);
}

TEST_CASE("computation errors exit with 3") {
  const fs::path p = fs::temp_directory_path() / "quadham_inverted.json";
  std::ofstream(p) << R"({"model": {"K": 1, "gamma": [[1, 0], [0, -1]]}})";
  CHECK(run({"spectrum", "--config", p.string()}).code == cli::kComputationError);
  CHECK(run({"analyze", "--config", p.string()}).code == cli::kSuccess);
  fs::remove(p);
}

TEST_CASE("the installed binary honours the exit-code contract") {
  const std::string bin = QUADHAM_BINARY;
  CHECK(shell(bin + " analyze --config " + config("b1.json") + " > /dev/null") == 0);
  CHECK(shell(bin + " analyze > /dev/null 2>&1") == 2);
  CHECK(shell("QUADHAM_TOL_SCALE=zero " + bin + " analyze --config " + config("b1.json") + " > /dev/null 2>&1") == 2);
  CHECK(shell(bin + " --help > /dev/null") == 0);
  const fs::path p = fs::temp_directory_path() / "quadham_free.json";
  std::ofstream(p) << R"({"model": {"K": 1, "gamma": [[0, 0], [0, 1]]}})";
  CHECK(shell(bin + " spectrum --config " + p.string() + " > /dev/null 2>&1") == 3);
  fs::remove(p);
}
