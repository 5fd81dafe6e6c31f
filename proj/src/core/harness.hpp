// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "cell.hpp"
#include "resolvent.hpp"
#include "smoothing.hpp"
#include "tensor.hpp"

namespace hom4 {

/// One term amplitude * cos(2 pi k.x + phase) of the right-hand side.
struct RhsMode {
  std::vector<int> k;
  double amplitude = 1.0;
  double phase = 0.0;
};

struct RhsSpec {
  std::vector<RhsMode> modes;
  /// Adds amplitude-0.5 energy at wavenumber (n_max/2, 0, ...), where n_max is
  /// the largest 1/eps of the sweep, i.e. at frequencies comparable to 1/eps.
  bool stress = false;
};

/// The fixed band-4 right-hand side used by the default sweep.
RhsSpec default_rhs(int dim);

struct Tolerances {
  double cell = 1e-10;
  double oscillating = 1e-10;
  int max_iter = 10000;
};

struct OutputSpec {
  std::string dir = "out";
  std::string prefix = "hom4";
};

/// Experiment description. The JSON keys are exactly the member names; nested
/// members use the nested struct's member names.
struct ExperimentConfig {
  int dim = 2;
  CoefficientFamily coefficient_family{FamilyKind::ScalarIsotropic, {1.5, 0.5}};
  int cell_grid = 32;
  std::vector<double> eps{0.25, 1.0 / 6.0, 0.125, 1.0 / 12.0, 0.0625};
  RhsSpec f = default_rhs(2);
  Tolerances tolerances;
  /// Subset of {"u_hat", "u_tilde", "w", "residual"}.
  std::vector<std::string> approximants{"u_hat", "u_tilde", "w", "residual"};
  OutputSpec output;
  std::uint64_t seed = 1;
  bool dealias = true;
  int threads = 1;

  /// Throws BadArgument on inconsistent settings.
  void validate() const;
  /// 1/eps as integers, in the listed order.
  std::vector<int> eps_inverse() const;
};

ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& cfg);
ExperimentConfig load_config(const std::filesystem::path& path);

/// f sampled on a torus grid.
ScalarField make_rhs(const ExperimentConfig& cfg, const GridSpec& torus);

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  /// Root-mean-square residual of the log-log least-squares line.
  double residual = 0.0;
  bool valid = false;
};
/// Least-squares fit of log(err) = slope * log(eps) + intercept. Needs at
/// least three finite positive points; otherwise valid = false.
SlopeFit fit_slope(const std::vector<double>& eps, const std::vector<double>& err);

struct ConvergenceRow {
  double eps = 0.0;
  int eps_inverse = 0;
  BundleErrors errors;
  int cg_iterations = 0;
  double cg_residual = 0.0;
};

struct ConvergenceReport {
  ExperimentConfig config;
  std::vector<ConvergenceRow> rows;
  std::map<std::string, SlopeFit> slopes;
  Tensor4 a_hat;
  double lambda0 = 0.0;
  std::vector<SolveStat> cell_report;
  nlohmann::json environment;
};

/// Column names of the error table, in CSV order.
const std::vector<std::string>& report_columns();
double column_value(const ConvergenceRow& row, const std::string& column);

Tensor4Field config_coefficients(const ExperimentConfig& cfg);
CellData config_cell(const ExperimentConfig& cfg);
ApproximantBundle config_bundle(const ExperimentConfig& cfg, const Tensor4Field& a, const CellData& cell, int n);

ConvergenceReport run_converge(const ExperimentConfig& cfg);
nlohmann::json report_to_json(const ConvergenceReport& r);
std::string report_to_csv(const ConvergenceReport& r);
/// Writes <prefix>.csv, <prefix>.json and <prefix>_<column>.dat into `dir`.
void write_report(const ConvergenceReport& r, const std::filesystem::path& dir);

struct CheckLine {
  std::string id;
  double value = 0.0;
  double limit = 0.0;
  int trials = 0;
  bool passed = false;
  std::string detail;
};

struct CheckReport {
  std::vector<CheckLine> lines;
  bool passed() const;
  std::string table() const;
};

/// Faults the check suite can inject to show that a broken invariant is
/// caught. "skew-flip" negates one potential family G^{ij,st}.
enum class Fault { None, SkewFlip };
Fault fault_from_string(const std::string& s);

/// Property suites of every module. Throws BadArgument when trials < 1.
CheckReport run_check(std::uint64_t seed, int trials, Fault fault = Fault::None);

/// chi_k sampled on s in [-2, 2] plus the gamma_k values.
std::string kernels_table(int samples = 17);

}  // namespace hom4
