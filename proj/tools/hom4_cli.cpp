// SPDX-License-Identifier: Apache-2.0
// Command-line front end. Talks to the library only through hom4.h.
#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "hom4/hom4.h"

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

struct Globals {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  bool no_dealias = false;
};

int report(hom4_status s) {
  std::fprintf(stderr, "hom4: %s\n", hom4_last_error());
  return s == HOM4_BAD_ARGUMENT ? kExitUsage : kExitFailure;
}

#define HOM4_TRY(call)                    \
  do {                                    \
    hom4_status st_ = (call);             \
    if (st_ != HOM4_OK) return report(st_); \
  } while (0)

class Config {
 public:
  ~Config() { hom4_config_free(cfg_); }
  hom4_config* get() const { return cfg_; }
  hom4_config** out() { return &cfg_; }

 private:
  hom4_config* cfg_ = nullptr;
};

class Cell {
 public:
  ~Cell() { hom4_cell_free(cell_); }
  hom4_cell* get() const { return cell_; }
  hom4_cell** out() { return &cell_; }

 private:
  hom4_cell* cell_ = nullptr;
};

void print_and_free(char* s) {
  std::fputs(s, stdout);
  hom4_string_free(s);
}

// Loads the config and applies the command-line overrides.
int prepare(const Globals& g, Config& cfg, std::string& out_dir) {
  if (g.config.empty())
    HOM4_TRY(hom4_config_default(cfg.out()));
  else
    HOM4_TRY(hom4_config_load(g.config.c_str(), cfg.out()));
  if (g.seed) HOM4_TRY(hom4_config_set_seed(cfg.get(), *g.seed));
  if (g.no_dealias) HOM4_TRY(hom4_config_set_dealias(cfg.get(), 0));
  if (!g.out.empty()) HOM4_TRY(hom4_config_set_output_dir(cfg.get(), g.out.c_str()));
  int threads = 1;
  HOM4_TRY(hom4_config_get_threads(cfg.get(), &threads));
  HOM4_TRY(hom4_set_threads(g.threads ? *g.threads : threads));
  char* dir = nullptr;
  HOM4_TRY(hom4_config_get_output_dir(cfg.get(), &dir));
  out_dir = dir;
  hom4_string_free(dir);
  return 0;
}

int cmd_cell(const Globals& g) {
  Config cfg;
  std::string out;
  if (int rc = prepare(g, cfg, out)) return rc;
  Cell cell;
  HOM4_TRY(hom4_cell_solve(cfg.get(), cell.out()));
  HOM4_TRY(hom4_cell_write(cell.get(), out.c_str()));
  int d = 0;
  HOM4_TRY(hom4_cell_dim(cell.get(), &d));
  double lambda0 = 0.0;
  HOM4_TRY(hom4_cell_lambda0(cell.get(), &lambda0));
  std::printf("cell data written to %s/cell.json (d = %d, lambda0 = %.3e)\n", out.c_str(), d, lambda0);
  return 0;
}

int cmd_solve(const Globals& g, int n) {
  Config cfg;
  std::string out;
  if (int rc = prepare(g, cfg, out)) return rc;
  Cell cell;
  HOM4_TRY(hom4_cell_solve(cfg.get(), cell.out()));
  const std::string dir = (std::filesystem::path(out) / ("eps_1_" + std::to_string(n))).string();
  double e[5];
  HOM4_TRY(hom4_solve(cfg.get(), cell.get(), n, dir.c_str(), e));
  std::printf("eps = 1/%d\n", n);
  std::printf("  err_u_hat_L2      %.6e\n  err_u_tilde_H2    %.6e\n  err_w_L2          %.6e\n", e[0], e[1], e[2]);
  std::printf("  err_w_printed_L2  %.6e\n  residual_Hminus2  %.6e\n", e[3], e[4]);
  std::printf("manifest written to %s/manifest.json\n", dir.c_str());
  return 0;
}

int cmd_converge(const Globals& g) {
  Config cfg;
  std::string out;
  if (int rc = prepare(g, cfg, out)) return rc;
  hom4_report* rep = nullptr;
  HOM4_TRY(hom4_converge(cfg.get(), &rep));
  hom4_status st = hom4_report_write(rep, out.c_str());
  char* csv = nullptr;
  if (st == HOM4_OK) st = hom4_report_to_csv(rep, &csv);
  if (st == HOM4_OK) {
    print_and_free(csv);
    for (const char* col : {"err_u_hat_L2", "err_u_tilde_H2", "err_w_L2", "err_w_printed_L2", "residual_Hminus2"}) {
      double s = 0.0;
      if (hom4_report_slope(rep, col, &s) == HOM4_OK) std::printf("slope %-18s %.3f\n", col, s);
    }
    std::printf("report written to %s\n", out.c_str());
  }
  hom4_report_free(rep);
  return st == HOM4_OK ? 0 : report(st);
}

int cmd_check(const Globals& g, int trials, const std::string& fault) {
  if (g.threads) HOM4_TRY(hom4_set_threads(*g.threads));
  int passed = 0;
  char* table = nullptr;
  HOM4_TRY(hom4_check(g.seed.value_or(1), trials, fault.c_str(), &passed, &table));
  print_and_free(table);
  std::printf("%s\n", passed ? "all checks passed" : "property violation");
  return passed ? 0 : kExitFailure;
}

int cmd_kernels(int samples) {
  char* table = nullptr;
  HOM4_TRY(hom4_kernels_table(samples, &table));
  print_and_free(table);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fourth-order periodic homogenization harness"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--config", g.config, "Experiment configuration (JSON)")->check(CLI::ExistingFile);
  app.add_option("--out", g.out, "Output directory (overrides output.dir)");
  app.add_option("--seed", g.seed, "Random seed");
  app.add_option("--threads", g.threads, "Worker threads; 0 uses every core")->check(CLI::NonNegativeNumber);
  app.add_flag("--no-dealias", g.no_dealias, "Disable 3/2-rule dealiasing of products");

  auto* cell = app.add_subcommand("cell", "Solve the cell problems and write CellData");
  auto* solve = app.add_subcommand("solve", "Build every approximant for one eps = 1/n");
  int n = 0;
  solve->add_option("--n", n, "1/eps; defaults to the first eps of the config");
  auto* converge = app.add_subcommand("converge", "Run the eps sweep and write the report");
  auto* check = app.add_subcommand("check", "Run the property suites");
  int trials = 50;
  std::string fault = "none";
  check->add_option("--trials", trials, "Random trials per property");
  check->add_option("--fault", fault, "Inject a fault: none or skew-flip");
  auto* kernels = app.add_subcommand("kernels", "Tabulate the smoothing kernels and gamma coefficients");
  int samples = 17;
  kernels->add_option("--samples", samples, "Sample points on [-2, 2]");

  // Global options are accepted after the subcommand as well.
  for (auto* sub : {cell, solve, converge, check, kernels}) sub->fallthrough();

  CLI11_PARSE(app, argc, argv);

  if (*cell) return cmd_cell(g);
  if (*solve) {
    if (n == 0) {
      Config cfg;
      std::string out;
      if (int rc = prepare(g, cfg, out)) return rc;
      HOM4_TRY(hom4_config_eps_inverse(cfg.get(), 0, &n));
    }
    return cmd_solve(g, n);
  }
  if (*converge) return cmd_converge(g);
  if (*check) return cmd_check(g, trials, fault);
  if (*kernels) return cmd_kernels(samples);
  return kExitUsage;
}
