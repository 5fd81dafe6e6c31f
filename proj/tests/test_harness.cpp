// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "errors.hpp"
#include "harness.hpp"
#include "io.hpp"
#include "parallel.hpp"
#include "support.hpp"

using namespace hom4;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

ExperimentConfig d1_config() {
  ExperimentConfig c;
  c.dim = 1;
  c.coefficient_family = {FamilyKind::D1Profile, {2.0, 1.0}};
  c.cell_grid = 64;
  c.eps = {0.25, 0.125, 1.0 / 16, 1.0 / 32};
  c.f = default_rhs(1);
  return c;
}

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("hom4_test_" + name);
  fs::remove_all(p);
  return p;
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return static_cast<ErrorCode>(0);
}

}  // namespace

TEST_CASE("config defaults and JSON round trip") {
  const ExperimentConfig c = config_from_json(json::object());
  CHECK(c.dim == 2);
  CHECK(c.cell_grid == 32);
  CHECK(c.eps.size() == 5u);
  CHECK(c.f.modes.size() == 7u);
  const json j = config_to_json(c);
  for (const char* key : {"dim", "coefficient_family", "cell_grid", "eps", "f", "tolerances", "approximants", "output",
                          "seed", "dealias", "threads"})
    CHECK(j.contains(key));
  CHECK(config_to_json(config_from_json(j)) == j);
}

TEST_CASE("a default-constructed config carries the default right-hand side") {
  ExperimentConfig c;
  CHECK(c.f.modes.size() == 7u);
  CHECK_NOTHROW(c.validate());
  c.f.modes.clear();
  CHECK(code_of([&] { c.validate(); }) == ErrorCode::BadArgument);
}

TEST_CASE("config parsing is strict") {
  CHECK(code_of([] { config_from_json(json{{"epsilon", {0.25}}}); }) == ErrorCode::BadArgument);
  CHECK(code_of([] { config_from_json(json{{"tolerances", {{"cg", 1e-8}}}}); }) == ErrorCode::BadArgument);
  CHECK(code_of([] { config_from_json(json{{"dim", "two"}}); }) == ErrorCode::BadArgument);
  CHECK(code_of([] { config_from_json(json{{"eps", {0.3}}}); }) == ErrorCode::BadArgument);
  CHECK(code_of([] { config_from_json(json{{"eps", {0.25, 0.25, 0.125}}}); }) == ErrorCode::BadArgument);
  CHECK(code_of([] { config_from_json(json{{"eps", {1.0}}}); }) == ErrorCode::BadArgument);
  CHECK(code_of([] { config_from_json(json{{"cell_grid", 48}}); }) == ErrorCode::BadArgument);
  CHECK(code_of([] { config_from_json(json{{"approximants", {"u_bar"}}}); }) == ErrorCode::BadArgument);
  CHECK(code_of([] {
          config_from_json(json{{"coefficient_family", {{"kind", "scalar_isotropic"}, {"parameters", {1.0, 0.5}}}}});
          config_coefficients(config_from_json(
              json{{"coefficient_family", {{"kind", "scalar_isotropic"}, {"parameters", {1.0, 0.5}}}}}));
        }) == ErrorCode::BadParameters);
  const ExperimentConfig c = config_from_json(json{{"dim", 1}, {"eps", {0.5, 0.25}}, {"seed", 99}});
  CHECK(c.seed == 99u);
  CHECK(c.eps_inverse() == std::vector<int>{2, 4});
  CHECK(c.f.modes.front().k.size() == 1u);
}

TEST_CASE("load_config reports missing files and bad JSON") {
  CHECK(code_of([] { load_config("/nonexistent/hom4.json"); }) == ErrorCode::Io);
  const fs::path dir = scratch_dir("badjson");
  fs::create_directories(dir);
  std::ofstream(dir / "bad.json") << "{ \"dim\": ";
  CHECK(code_of([&] { load_config(dir / "bad.json"); }) == ErrorCode::BadArgument);
}

TEST_CASE("right-hand side matches the listed modes") {
  ExperimentConfig c;
  c.f.modes = {{{1, 2}, 0.5, 0.3}, {{3, -1}, 0.2, 0.0}};
  const GridSpec g{2, 32, 1.0};
  const auto f = make_rhs(c, g);
  const auto exact = ScalarField::sample(g, [](const RealVec& x) {
    return 0.5 * std::cos(hom4::test::kTwoPi * (x[0] + 2 * x[1]) + 0.3) +
           0.2 * std::cos(hom4::test::kTwoPi * (3 * x[0] - x[1]));
  });
  CHECK(hom4::test::max_abs_diff(f, exact) < 1e-14);

  c.f.stress = true;
  const auto fs_ = make_rhs(c, g);
  const auto extra = ScalarField::sample(g, [](const RealVec& x) { return 0.5 * std::cos(hom4::test::kTwoPi * 8 * x[0]); });
  CHECK(hom4::test::max_abs_diff(fs_, exact + extra) < 1e-14);

  c.f.modes = {{{16, 0}, 1.0, 0.0}};
  c.f.stress = false;
  CHECK(code_of([&] { make_rhs(c, g); }) == ErrorCode::BadArgument);
}

TEST_CASE("slope fitter recovers exact power laws") {
  const std::vector<double> eps{0.25, 1.0 / 6, 0.125, 1.0 / 12, 0.0625};
  for (double p : {1.0, 2.0, 2.7, 4.0}) {
    std::vector<double> err;
    for (double e : eps) err.push_back(3.7 * std::pow(e, p));
    const SlopeFit fit = fit_slope(eps, err);
    REQUIRE(fit.valid);
    CHECK(std::abs(fit.slope - p) <= 1e-10);
    CHECK(std::abs(fit.intercept - std::log(3.7)) <= 1e-10);
    CHECK(fit.residual <= 1e-12);
  }
  CHECK_FALSE(fit_slope({0.25, 0.125}, {1.0, 0.5}).valid);
  CHECK_FALSE(fit_slope({0.25, 0.125, 0.0625}, {1.0, std::nan(""), 0.1}).valid);
}

TEST_CASE("one-dimensional sweep: zeroth-order error decays like eps^2") {
  const ConvergenceReport r = run_converge(d1_config());
  REQUIRE(r.rows.size() == 4u);
  CHECK(r.a_hat(0, 0, 0, 0) == doctest::Approx(std::sqrt(3.0)).epsilon(1e-9));
  const SlopeFit& s = r.slopes.at("err_u_hat_L2");
  REQUIRE(s.valid);
  CHECK(s.slope >= 1.7);
  for (const auto& row : r.rows) CHECK(row.errors.err_w_L2 <= row.errors.err_u_hat_L2);
}

TEST_CASE("reports are deterministic and thread-count independent") {
  ExperimentConfig c = d1_config();
  c.eps = {0.25, 0.125, 1.0 / 16};
  set_thread_count(1);
  const std::string a = report_to_csv(run_converge(c));
  const std::string b = report_to_csv(run_converge(c));
  set_thread_count(3);
  const std::string t = report_to_csv(run_converge(c));
  set_thread_count(1);
  CHECK(a == b);
  CHECK(a == t);
}

TEST_CASE("report files") {
  ExperimentConfig c = d1_config();
  c.eps = {0.25, 0.125, 1.0 / 16};
  c.approximants = {"u_hat", "w"};
  c.output.prefix = "run";
  const ConvergenceReport r = run_converge(c);
  const fs::path dir = scratch_dir("report");
  write_report(r, dir);
  CHECK(fs::exists(dir / "run.csv"));
  CHECK(fs::exists(dir / "run_err_u_hat_L2.dat"));
  CHECK_FALSE(fs::exists(dir / "run_err_u_tilde_H2.dat"));
  std::ifstream csv(dir / "run.csv");
  std::string header;
  std::getline(csv, header);
  CHECK(header == "eps,eps_inverse,err_u_hat_L2,err_u_tilde_H2,err_w_L2,err_w_printed_L2,residual_Hminus2,cg_iterations");
  json j;
  std::ifstream(dir / "run.json") >> j;
  CHECK(j["rows"].size() == 3u);
  CHECK(j["rows"][0]["err_u_tilde_H2"].is_null());
  CHECK(j["slopes"].contains("err_u_hat_L2"));
  CHECK_FALSE(j["slopes"].contains("err_u_tilde_H2"));
  CHECK(j["environment"].contains("fft"));
}

TEST_CASE("binary sidecars round trip and cell output lists every field") {
  const fs::path dir = scratch_dir("cell");
  fs::create_directories(dir);
  const std::vector<double> v{1.0, -2.5, 1e-300, 3.141592653589793};
  write_binary(dir / "x.bin", v);
  CHECK(read_binary(dir / "x.bin") == v);
  CHECK(fs::file_size(dir / "x.bin") == 32u);

  const CellData cell = cell_pipeline(make_family({FamilyKind::ScalarIsotropic, {1.5, 0.5}}, {2, 8, 1.0}));
  write_cell(cell, dir);
  json j;
  std::ifstream(dir / "cell.json") >> j;
  CHECK(j["a_hat"].size() == 16u);
  CHECK(j["b"].size() == 32u);
  CHECK(j["c"].size() == 64u);
  CHECK(j["fields"]["N2"].size() == 3u);
  CHECK(j["fields"]["N3"].size() == 6u);
  CHECK(j["fields"]["G2"].size() == 27u);
  const auto n01 = read_binary(dir / j["fields"]["N2"]["N01"]["file"].get<std::string>());
  CHECK(n01 == std::vector<double>(cell.n2(0, 1).values().begin(), cell.n2(0, 1).values().end()));
  CHECK(format_double(0.1) == "0.10000000000000001");
}

TEST_CASE("property suites pass and catch an injected fault") {
  const CheckReport ok = run_check(1, 3);
  INFO(ok.table());
  CHECK(ok.passed());
  const CheckReport bad = run_check(1, 1, Fault::SkewFlip);
  CHECK_FALSE(bad.passed());
  bool named = false;
  for (const auto& l : bad.lines)
    if (!l.passed && l.id == "potential-skew-symmetry") named = true;
  CHECK(named);
  CHECK(code_of([] { run_check(1, 0); }) == ErrorCode::BadArgument);
  CHECK(code_of([] { fault_from_string("flip"); }) == ErrorCode::BadArgument);
}

TEST_CASE("kernel table") {
  const std::string t = kernels_table(5);
  CHECK(t.find("gamma_3 = 0.125") != std::string::npos);
  std::istringstream in(t);
  std::string line;
  int rows = 0;
  while (std::getline(in, line))
    if (!line.empty() && line[0] != '#' && line[0] != 's') ++rows;
  CHECK(rows == 5);
}
