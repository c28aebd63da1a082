#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "nlsob/cli.hpp"
#include "nlsob/manifold.hpp"
#include "nlsob/report.hpp"

using namespace nlsob;
namespace fs = std::filesystem;

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

fs::path scratch_dir() {
  const auto d = fs::temp_directory_path() / "nlsob_cli_test";
  fs::create_directories(d);
  return d;
}

std::vector<std::string> keys(const Json& j) {
  std::vector<std::string> k;
  for (auto it = j.begin(); it != j.end(); ++it) k.push_back(it.key());
  return k;
}

}  // namespace

TEST_CASE("constants subcommand and envelope") {
  const auto r = run({"constants", "--dim", "4", "--alpha", "2"});
  REQUIRE(r.code == kExitOk);
  const auto j = Json::parse(r.out);
  CHECK(keys(j) == std::vector<std::string>{"grid", "params", "payload", "tool_version"});
  CHECK(j["payload"]["c_hls"].get<double>() == doctest::Approx(3.8476).epsilon(1e-4));
  CHECK(j["params"]["N"] == 4);
  CHECK(j["grid"]["n"] == kDefaultGridN);
}

TEST_CASE("usage and validation errors exit with 1") {
  auto r = run({"constants", "--bogus"});
  CHECK(r.code == kExitValidation);
  CHECK(r.err.find("Usage") != std::string::npos);
  CHECK(r.out.empty());
  CHECK(run({}).code == kExitValidation);
  CHECK(run({"frobnicate"}).code == kExitValidation);
  CHECK(run({"constants", "--dim", "2"}).code == kExitValidation);
  CHECK(run({"constants", "--alpha", "7"}).code == kExitValidation);
  CHECK(run({"deficit", "--input", "/nonexistent/field.csv"}).code == kExitValidation);
  CHECK(run({"--help"}).code == kExitOk);
}

TEST_CASE("verify-bubble") {
  const auto r = run({"verify-bubble", "--dim", "3", "--alpha", "2"});
  REQUIRE(r.code == kExitOk);
  const auto j = Json::parse(r.out);
  CHECK(j["payload"]["el_residual"].get<double>() < 1e-4);
  CHECK(j["payload"]["passed"] == true);
}

TEST_CASE("spectrum at (6, 4) contains 1 and 2") {
  const auto csv = scratch_dir() / "kernel.csv";
  const auto r = run({"spectrum", "--dim", "6", "--alpha", "4", "--ell", "0", "--grid-n", "384", "--k", "3",
                      "--dump-kernel", csv.string()});
  REQUIRE(r.code == kExitOk);
  const auto j = Json::parse(r.out)["payload"];
  CHECK(keys(j) == std::vector<std::string>{"b1_candidate", "eigenvalues", "ell", "k_count", "mu_gap"});
  const auto ev = j["eigenvalues"].get<std::vector<double>>();
  REQUIRE(ev.size() == 3u);
  CHECK(ev[0] == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(ev[1] == doctest::Approx(2.0).epsilon(1e-2));
  std::ifstream f(csv);
  std::string header;
  std::getline(f, header);
  CHECK(header == "rho,kappa");
}

TEST_CASE("deficit subcommand reads a field and writes the decomposition") {
  const auto dir = scratch_dir();
  const auto p = make_params(3, 1.0);
  const auto g = make_log_grid(1e-3, 1e3, 1024);
  const auto u = bubble(p, {1.5, 2.0, {}}, g) +
                 sample(g, [](double r) { return 0.01 * std::exp(-r * r); }, INFINITY, 0.01);
  write_csv(u, (dir / "u.csv").string());
  const auto dec_path = dir / "dec.json";
  const auto r = run({"deficit", "--dim", "3", "--alpha", "1", "--input", (dir / "u.csv").string(),
                      "--decomposition-out", dec_path.string()});
  REQUIRE(r.code == kExitOk);
  const auto j = Json::parse(r.out);
  CHECK(keys(j["payload"]) == std::vector<std::string>{"deficit", "dist", "grad_energy", "hls_energy", "ratio"});
  CHECK(j["payload"]["deficit"].get<double>() > 0.0);
  CHECK(j["grid"]["n"] == 1024);
  std::ifstream f(dec_path);
  const auto d = Json::parse(f)["payload"];
  CHECK(keys(d) == std::vector<std::string>{"c", "d", "lambda", "w_csv_path"});
  CHECK(d["lambda"].get<double>() == doctest::Approx(2.0).epsilon(1e-2));
  CHECK(fs::exists(d["w_csv_path"].get<std::string>()));
}

TEST_CASE("numerical failures exit with 2") {
  const auto dir = scratch_dir();
  const auto g = make_log_grid(1e-3, 1e3, 512);
  auto f = [](double r) { return std::exp(-std::log(r) * std::log(r) / 50.0); };
  write_csv(sample(g, f, 8.0, f(1e-3)), (dir / "flat.csv").string());
  const auto r = run({"deficit", "--input", (dir / "flat.csv").string()});
  CHECK(r.code == kExitNumerical);
  CHECK(!r.err.empty());
}

TEST_CASE("reports are byte-identical across runs") {
  const std::vector<std::string> args{"sweep", "--dim", "4", "--alpha", "2", "--grid-n", "512", "--seed", "9",
                                      "--random", "1", "--epsilons", "1e-2", "1e-3"};
  const auto a = run(args);
  const auto b = run(args);
  REQUIRE(a.code == kExitOk);
  CHECK(a.out == b.out);
  const auto out = scratch_dir() / "bounded.json";
  REQUIRE(run({"bounded", "--lambdas", "100", "1000", "--out", out.string()}).code == kExitOk);
  std::ifstream f(out);
  const auto j = Json::parse(f);
  CHECK(j["payload"]["weak_ratio"].size() == 2u);
}
