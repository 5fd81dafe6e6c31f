// SPDX-License-Identifier: Apache-2.0
#include "harness.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include "errors.hpp"
#include "fft.hpp"
#include "io.hpp"
#include "operator.hpp"
#include "parallel.hpp"

namespace hom4 {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::set<std::string> kApproximants{"u_hat", "u_tilde", "w", "residual"};

void reject_unknown(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!j.is_object()) throw Error(ErrorCode::BadArgument, where + " must be an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || it.key() == a;
    if (!ok) throw Error(ErrorCode::BadArgument, "unknown key '" + it.key() + "' in " + where);
  }
}

template <class T>
void read(const json& j, const char* key, T& out, const std::string& where) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::BadArgument, where + "." + key + ": " + e.what());
  }
}

ScalarField random_field(const GridSpec& g, int band, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  auto modes = ModeTable::get(g.dim, g.points);
  Spectrum s(g.size(), Complex(0.0));
  for (std::size_t l = 0; l < s.size(); ++l) {
    const IntVec& k = modes->k(l);
    bool inside = !modes->nyquist(l);
    for (int j = 0; j < g.dim; ++j) inside = inside && std::abs(k[j]) <= band;
    if (inside) s[l] = Complex(normal(rng), normal(rng));
  }
  return ScalarField::from_spectrum(g, std::move(s));
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double max_abs(std::span<const double> a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << std::setprecision(3) << std::scientific << v;
  return os.str();
}

}  // namespace

// ---------------------------------------------------------------------------
// Configuration

std::vector<int> ExperimentConfig::eps_inverse() const {
  std::vector<int> out;
  for (double e : eps) out.push_back(static_cast<int>(std::lround(1.0 / e)));
  return out;
}

void ExperimentConfig::validate() const {
  if (dim < 1 || dim > 3) throw Error(ErrorCode::BadArgument, "dim must be 1, 2 or 3");
  if (cell_grid < 4 || !is_power_of_two(cell_grid))
    throw Error(ErrorCode::BadArgument, "cell_grid must be a power of two >= 4");
  std::set<int> seen;
  for (double e : eps) {
    if (!(e > 0.0) || e > 0.5) throw Error(ErrorCode::BadArgument, "every eps must lie in (0, 1/2]");
    const double inv = 1.0 / e;
    if (std::abs(inv - std::round(inv)) > 1e-9 * inv)
      throw Error(ErrorCode::BadArgument, "eps values must be reciprocals of integers");
    if (!seen.insert(static_cast<int>(std::lround(inv))).second)
      throw Error(ErrorCode::BadArgument, "eps values must be distinct");
  }
  if (f.modes.empty()) throw Error(ErrorCode::BadArgument, "f needs at least one mode");
  for (const auto& m : f.modes) {
    if (static_cast<int>(m.k.size()) != dim) throw Error(ErrorCode::BadArgument, "f mode k must have dim entries");
    if (!std::isfinite(m.amplitude) || !std::isfinite(m.phase))
      throw Error(ErrorCode::BadArgument, "f mode amplitude and phase must be finite");
  }
  if (!(tolerances.cell > 0.0) || !(tolerances.oscillating > 0.0) || tolerances.max_iter < 1)
    throw Error(ErrorCode::BadArgument, "tolerances must be positive");
  for (const auto& a : approximants)
    if (!kApproximants.count(a)) throw Error(ErrorCode::BadArgument, "unknown approximant '" + a + "'");
  if (threads < 0) throw Error(ErrorCode::BadArgument, "threads must be >= 0");
}

RhsSpec default_rhs(int dim) {
  RhsSpec r;
  auto add = [&](std::vector<int> k, double a, double p) { r.modes.push_back({std::move(k), a, p}); };
  switch (dim) {
    case 1:
      add({1}, 1.0, 0.0);
      add({2}, 0.5, 0.7);
      add({3}, 0.25, 1.3);
      add({4}, 0.125, 0.4);
      break;
    case 2:
      add({1, 0}, 1.0, 0.0);
      add({0, 1}, 0.8, -1.27);
      add({1, 1}, 0.6, 0.0);
      add({2, -1}, 0.4, 1.0);
      add({3, 1}, 0.25, -1.57);
      add({4, 0}, 0.15, 0.0);
      add({2, 3}, 0.1, 0.0);
      break;
    default:
      add({1, 0, 0}, 1.0, 0.0);
      add({0, 1, 0}, 0.8, 0.3);
      add({0, 0, 1}, 0.6, -0.4);
      add({1, -1, 2}, 0.3, 0.9);
      add({2, 1, -1}, 0.2, 0.0);
      add({4, 0, 1}, 0.1, 0.5);
      break;
  }
  return r;
}

ExperimentConfig config_from_json(const json& j) {
  reject_unknown(j,
                 {"dim", "coefficient_family", "cell_grid", "eps", "f", "tolerances", "approximants", "output", "seed",
                  "dealias", "threads"},
                 "config");
  ExperimentConfig c;
  read(j, "dim", c.dim, "config");
  c.f = default_rhs(c.dim);
  if (j.contains("coefficient_family")) {
    const json& fj = j.at("coefficient_family");
    reject_unknown(fj, {"kind", "parameters"}, "coefficient_family");
    std::string kind = family_kind_name(c.coefficient_family.kind);
    read(fj, "kind", kind, "coefficient_family");
    c.coefficient_family.kind = family_kind_from_string(kind);
    c.coefficient_family.parameters.clear();
    read(fj, "parameters", c.coefficient_family.parameters, "coefficient_family");
  }
  read(j, "cell_grid", c.cell_grid, "config");
  read(j, "eps", c.eps, "config");
  if (j.contains("f")) {
    const json& fj = j.at("f");
    reject_unknown(fj, {"modes", "stress"}, "f");
    read(fj, "stress", c.f.stress, "f");
    if (fj.contains("modes")) {
      c.f.modes.clear();
      for (const auto& mj : fj.at("modes")) {
        reject_unknown(mj, {"k", "amplitude", "phase"}, "f.modes[]");
        RhsMode m;
        read(mj, "k", m.k, "f.modes[]");
        read(mj, "amplitude", m.amplitude, "f.modes[]");
        read(mj, "phase", m.phase, "f.modes[]");
        c.f.modes.push_back(m);
      }
    }
  }
  if (j.contains("tolerances")) {
    const json& tj = j.at("tolerances");
    reject_unknown(tj, {"cell", "oscillating", "max_iter"}, "tolerances");
    read(tj, "cell", c.tolerances.cell, "tolerances");
    read(tj, "oscillating", c.tolerances.oscillating, "tolerances");
    read(tj, "max_iter", c.tolerances.max_iter, "tolerances");
  }
  read(j, "approximants", c.approximants, "config");
  if (j.contains("output")) {
    const json& oj = j.at("output");
    reject_unknown(oj, {"dir", "prefix"}, "output");
    read(oj, "dir", c.output.dir, "output");
    read(oj, "prefix", c.output.prefix, "output");
  }
  read(j, "seed", c.seed, "config");
  read(j, "dealias", c.dealias, "config");
  read(j, "threads", c.threads, "config");
  c.validate();
  return c;
}

json config_to_json(const ExperimentConfig& c) {
  json modes = json::array();
  for (const auto& m : c.f.modes) modes.push_back({{"k", m.k}, {"amplitude", m.amplitude}, {"phase", m.phase}});
  return {{"dim", c.dim},
          {"coefficient_family",
           {{"kind", family_kind_name(c.coefficient_family.kind)}, {"parameters", c.coefficient_family.parameters}}},
          {"cell_grid", c.cell_grid},
          {"eps", c.eps},
          {"f", {{"modes", modes}, {"stress", c.f.stress}}},
          {"tolerances",
           {{"cell", c.tolerances.cell},
            {"oscillating", c.tolerances.oscillating},
            {"max_iter", c.tolerances.max_iter}}},
          {"approximants", c.approximants},
          {"output", {{"dir", c.output.dir}, {"prefix", c.output.prefix}}},
          {"seed", c.seed},
          {"dealias", c.dealias},
          {"threads", c.threads}};
}

ExperimentConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open config " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::BadArgument, "config " + path.string() + " is not valid JSON: " + e.what());
  }
  return config_from_json(j);
}

ScalarField make_rhs(const ExperimentConfig& cfg, const GridSpec& torus) {
  std::vector<RhsMode> modes = cfg.f.modes;
  if (cfg.f.stress && !cfg.eps.empty()) {
    const auto inv = cfg.eps_inverse();
    RhsMode m;
    m.k.assign(cfg.dim, 0);
    m.k[0] = std::max(1, *std::max_element(inv.begin(), inv.end()) / 2);
    m.amplitude = 0.5;
    modes.push_back(m);
  }
  for (const auto& m : modes)
    for (int kj : m.k)
      if (2 * std::abs(kj) >= torus.points)
        throw Error(ErrorCode::BadArgument, "f mode is not resolved by the torus grid");
  const double tp = 2.0 * std::numbers::pi;
  return ScalarField::sample(torus, [&](const RealVec& x) {
    double v = 0.0;
    for (const auto& m : modes) {
      double arg = m.phase;
      for (int j = 0; j < torus.dim; ++j) arg += tp * m.k[j] * x[j];
      v += m.amplitude * std::cos(arg);
    }
    return v;
  });
}

// ---------------------------------------------------------------------------
// Sweep

SlopeFit fit_slope(const std::vector<double>& eps, const std::vector<double>& err) {
  std::vector<double> x, y;
  for (std::size_t i = 0; i < std::min(eps.size(), err.size()); ++i)
    if (eps[i] > 0.0 && err[i] > 0.0 && std::isfinite(err[i])) {
      x.push_back(std::log(eps[i]));
      y.push_back(std::log(err[i]));
    }
  SlopeFit fit;
  if (x.size() < 3) return fit;
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i] / n;
    my += y[i] / n;
  }
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx <= 0.0) return fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (fit.slope * x[i] + fit.intercept);
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / n);
  fit.valid = true;
  return fit;
}

const std::vector<std::string>& report_columns() {
  static const std::vector<std::string> cols{"err_u_hat_L2", "err_u_tilde_H2", "err_w_L2", "err_w_printed_L2",
                                             "residual_Hminus2"};
  return cols;
}

double column_value(const ConvergenceRow& row, const std::string& column) {
  const BundleErrors& e = row.errors;
  if (column == "err_u_hat_L2") return e.err_u_hat_L2;
  if (column == "err_u_tilde_H2") return e.err_u_tilde_H2;
  if (column == "err_w_L2") return e.err_w_L2;
  if (column == "err_w_printed_L2") return e.err_w_printed_L2;
  if (column == "residual_Hminus2") return e.residual_Hminus2;
  throw Error(ErrorCode::BadArgument, "unknown report column " + column);
}

Tensor4Field config_coefficients(const ExperimentConfig& cfg) {
  cfg.validate();
  return make_family(cfg.coefficient_family, GridSpec{cfg.dim, cfg.cell_grid, 1.0});
}

CellData config_cell(const ExperimentConfig& cfg) {
  CellOptions opt;
  opt.tol = cfg.tolerances.cell;
  opt.max_iter = cfg.tolerances.max_iter;
  opt.dealias = cfg.dealias;
  return cell_pipeline(config_coefficients(cfg), opt);
}

ApproximantBundle config_bundle(const ExperimentConfig& cfg, const Tensor4Field& a, const CellData& cell, int n) {
  EpsEmbedding emb(n, cell.grid);
  SolveOptions opt;
  opt.tol = cfg.tolerances.oscillating;
  opt.max_iter = cfg.tolerances.max_iter;
  opt.dealias = cfg.dealias;
  auto has = [&](const char* s) {
    return std::find(cfg.approximants.begin(), cfg.approximants.end(), s) != cfg.approximants.end();
  };
  BundleSelection sel;
  sel.u_tilde = has("u_tilde");
  sel.w = has("w");
  sel.residual = has("residual");
  ApproximantBundle b = build_bundle(a, cell, emb, make_rhs(cfg, emb.torus_grid()), opt, sel);
  if (!has("u_hat")) b.u_hat = ScalarField();
  return b;
}

ConvergenceReport run_converge(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.eps.empty()) throw Error(ErrorCode::BadArgument, "converge needs at least one eps");
  ConvergenceReport rep;
  rep.config = cfg;
  const Tensor4Field a = config_coefficients(cfg);
  CellOptions copt;
  copt.tol = cfg.tolerances.cell;
  copt.max_iter = cfg.tolerances.max_iter;
  copt.dealias = cfg.dealias;
  const CellData cell = cell_pipeline(a, copt);
  rep.a_hat = cell.a_hat;
  rep.lambda0 = lambda0_diagnostic(cell);
  rep.cell_report = cell.solver_report;

  const auto inv = cfg.eps_inverse();
  rep.rows.resize(inv.size());
  parallel_for(inv.size(), [&](std::size_t i) {
    try {
      ApproximantBundle b = config_bundle(cfg, a, cell, inv[i]);
      ConvergenceRow& row = rep.rows[i];
      row.eps = b.eps;
      row.eps_inverse = inv[i];
      row.errors = bundle_errors(b);
      row.cg_iterations = b.oracle.iterations;
      row.cg_residual = b.oracle.residual;
    } catch (const Error& e) {
      throw e.within("eps = 1/" + std::to_string(inv[i]));
    }
  });
  std::vector<double> eps;
  for (const auto& r : rep.rows) eps.push_back(r.eps);
  for (const auto& col : report_columns()) {
    std::vector<double> err;
    for (const auto& r : rep.rows) err.push_back(column_value(r, col));
    rep.slopes[col] = fit_slope(eps, err);
  }
  rep.environment = {{"threads", thread_count()},
                     {"dealias", cfg.dealias},
                     {"fft", fft::library_version()},
                     {"compiler", __VERSION__},
                     {"cxx_standard", static_cast<long>(__cplusplus)}};
  return rep;
}

json report_to_json(const ConvergenceReport& r) {
  json rows = json::array();
  for (const auto& row : r.rows) {
    json jr{{"eps", row.eps}, {"eps_inverse", row.eps_inverse}, {"cg_iterations", row.cg_iterations},
            {"cg_residual", row.cg_residual}, {"f_L2", row.errors.norm_f}};
    for (const auto& col : report_columns()) {
      const double v = column_value(row, col);
      jr[col] = std::isfinite(v) ? json(v) : json(nullptr);
    }
    rows.push_back(jr);
  }
  json slopes;
  for (const auto& [col, s] : r.slopes) {
    if (!s.valid) continue;
    slopes[col] = {{"slope", s.slope}, {"intercept", s.intercept}, {"residual", s.residual}};
  }
  json cell_rep = json::array();
  for (const auto& s : r.cell_report)
    cell_rep.push_back({{"problem", s.problem}, {"iterations", s.iterations}, {"residual", s.residual}});
  return {{"version", 1},
          {"config", config_to_json(r.config)},
          {"rows", rows},
          {"slopes", slopes},
          {"a_hat", r.a_hat.components()},
          {"lambda0", r.lambda0},
          {"cell_solver", cell_rep},
          {"environment", r.environment}};
}

std::string report_to_csv(const ConvergenceReport& r) {
  std::ostringstream os;
  os << "eps,eps_inverse";
  for (const auto& c : report_columns()) os << "," << c;
  os << ",cg_iterations\n";
  for (const auto& row : r.rows) {
    os << format_double(row.eps) << "," << row.eps_inverse;
    for (const auto& c : report_columns()) {
      const double v = column_value(row, c);
      os << "," << (std::isfinite(v) ? format_double(v) : "nan");
    }
    os << "," << row.cg_iterations << "\n";
  }
  return os.str();
}

void write_report(const ConvergenceReport& r, const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create " + dir.string());
  const std::string prefix = r.config.output.prefix;
  auto write = [&](const fs::path& p, const std::string& text) {
    std::ofstream out(p);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + p.string());
    out << text;
  };
  write(dir / (prefix + ".csv"), report_to_csv(r));
  write(dir / (prefix + ".json"), report_to_json(r).dump(2) + "\n");
  for (const auto& c : report_columns()) {
    std::ostringstream os;
    os << "# eps " << c << "\n";
    bool any = false;
    for (const auto& row : r.rows) {
      const double v = column_value(row, c);
      if (!std::isfinite(v)) continue;
      os << format_double(row.eps) << " " << format_double(v) << "\n";
      any = true;
    }
    if (any) write(dir / (prefix + "_" + c + ".dat"), os.str());
  }
}

// ---------------------------------------------------------------------------
// Property suites

bool CheckReport::passed() const {
  return std::all_of(lines.begin(), lines.end(), [](const CheckLine& l) { return l.passed; });
}

std::string CheckReport::table() const {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << std::left << std::setw(40) << "check" << std::setw(12) << "worst" << std::setw(12) << "limit"
     << std::setw(8) << "trials"
     << "status\n";
  for (const auto& l : lines) {
    os << std::left << std::setw(40) << l.id << std::setw(12) << fmt(l.value) << std::setw(12) << fmt(l.limit)
       << std::setw(8) << l.trials << (l.passed ? "ok" : "FAIL");
    if (!l.passed && !l.detail.empty()) os << "  " << l.detail;
    os << "\n";
  }
  return os.str();
}

Fault fault_from_string(const std::string& s) {
  if (s.empty() || s == "none") return Fault::None;
  if (s == "skew-flip") return Fault::SkewFlip;
  throw Error(ErrorCode::BadArgument, "unknown fault '" + s + "'");
}

CheckReport run_check(std::uint64_t seed, int trials, Fault fault) {
  if (trials < 1) throw Error(ErrorCode::BadArgument, "check needs trials >= 1");
  CheckReport rep;
  auto line = [&](const std::string& id, double value, double limit, int n, const std::string& detail = {}) {
    rep.lines.push_back({id, value, limit, n, value <= limit, detail});
  };
  std::mt19937_64 rng(seed);
  const int probes = std::min(trials, 20);

  // spectral core
  {
    const GridSpec g{2, 32, 1.0};
    double adj = 0.0, trip = 0.0;
    for (int t = 0; t < probes; ++t) {
      const ScalarField v = random_field(g, 6, rng);
      std::vector<ScalarField> e;
      for (int p = 0; p < pair_count(2); ++p) e.push_back(random_field(g, 6, rng));
      const MatrixField eta(g, 2, e);
      const MatrixField Dv = apply_D(v);
      const double lhs = inner(apply_Dstar(eta), v);
      const double rhs = inner(eta, Dv);
      adj = std::max(adj, std::abs(lhs - rhs) / (l2_norm(eta) * l2_norm(Dv)));
      const ScalarField back = ScalarField::from_spectrum(g, v.spectrum());
      trip = std::max(trip, max_abs_diff(back.values(), v.values()) / max_abs(v.values()));
    }
    line("spectral-adjointness", adj, 1e-12, probes);
    line("spectral-round-trip", trip, 1e-12, probes);
  }

  // coefficients
  const GridSpec cg{2, 32, 1.0};
  const Tensor4Field a = make_family({FamilyKind::ScalarIsotropic, {1.5, 0.5}}, cg);
  {
    const Validation v = validate(a);
    line("coefficient-lambda", std::abs(v.lambda - 0.5), 1e-12, 1);
    std::uniform_int_distribution<std::size_t> node(0, cg.size() - 1);
    std::normal_distribution<double> normal(0.0, 1.0);
    double worst = 0.0;
    for (int t = 0; t < probes; ++t) {
      const Tensor4 at = a.at(node(rng));
      std::vector<double> xi(4), xit(4), sum(4);
      for (double& x : xi) x = normal(rng);
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
          xit[i * 2 + j] = xi[j * 2 + i];
          sum[i * 2 + j] = xi[i * 2 + j] + xit[i * 2 + j];
        }
      const SymMatrix lhs = at.apply(sum);
      const SymMatrix rhs = at.apply(xi);
      for (int p = 0; p < 3; ++p) worst = std::max(worst, std::abs(lhs.pair(p) - 2.0 * rhs.pair(p)) / 4.0);
    }
    line("coefficient-symmetric-part-action", worst, 1e-14, probes);
  }

  // cell problems
  CellData cell = cell_pipeline(a);
  if (fault == Fault::SkewFlip) {
    auto& fam = cell.G2[pair_index(2, 0, 0)][pair_index(2, 0, 1)];
    fam = -1.0 * fam;
  }
  {
    line("cell-hom-symmetry", cell.a_hat_asymmetry, 1e-10, 1);
    const double lam = validate(a).lambda;
    const double lo = cell.a_hat.eigen_range().first;
    line("cell-hom-ellipticity", lam * (1.0 - 1e-6) / lo, 1.0, 1);
    double mean = 0.0;
    for (const auto& n : cell.N2) mean = std::max(mean, std::abs(n.mean()));
    for (const auto& n : cell.N3) mean = std::max(mean, std::abs(n.mean()));
    line("cell-mean-zero", mean, 1e-14, 1);

    double ident = 0.0, skew = 0.0;
    std::string where;
    auto check_family = [&](const MatrixField& g, const std::vector<MatrixField>& G, const std::string& name) {
      const double gn = std::max(l2_norm(g), 1e-300);
      for (int st = 0; st < pair_count(2); ++st) {
        const double r = sobolev_norm(apply_Dstar(G[st]) - g.pair(st), Space::L2) / gn;
        if (r > ident) {
          ident = r;
          where = name;
        }
        for (int km = 0; km < pair_count(2); ++km)
          skew = std::max(skew, max_abs(std::span<const double>((G[st].pair(km) + G[km].pair(st)).values())));
      }
    };
    for (int r = 0; r < pair_count(2); ++r) check_family(cell.g2[r], cell.G2[r], "G2 family " + std::to_string(r));
    for (std::size_t t = 0; t < cell.g3.size(); ++t)
      check_family(cell.g3[t], cell.G3[t], "G3 family " + std::to_string(t));
    line("potential-identity (D*G = g)", ident, 1e-10, 1, where);
    line("potential-skew-symmetry", skew, 0.0, 1);
  }

  // smoothing
  {
    const InequalityReport lr = check_inequality_suite(seed, std::max(trials, 1));
    for (const auto& c : lr.checks) line("smoothing:" + c.id, c.worst_ratio, 1.0, c.trials, c.worst_input);
  }

  // resolvents
  {
    const EpsEmbedding emb(4, cell.grid);
    const GridSpec& tg = emb.torus_grid();
    const HomogenizedSymbol sym = HomogenizedSymbol::from_cell(cell);
    const OscillatingOperator op(a, emb);
    double k2 = 0.0, self = 0.0, res = 0.0;
    for (int t = 0; t < probes; ++t) {
      const ScalarField f = random_field(tg, 8, rng);
      const ScalarField g = random_field(tg, 8, rng);
      const ScalarField Kf = corrector_K2(cell, sym, emb, f);
      const ScalarField Ksg = corrector_K2_adjoint(cell, sym, emb, g);
      k2 = std::max(k2, std::abs(inner(Kf, g) - inner(f, Ksg)) /
                            (sobolev_norm(Kf, Space::L2) * sobolev_norm(g, Space::L2)));
      const ScalarField Af = op.apply(f);
      const ScalarField Ag = op.apply(g);
      self = std::max(self, std::abs(inner(Af, g) - inner(f, Ag)) /
                                (sobolev_norm(Af, Space::L2) * sobolev_norm(g, Space::L2)));
      const ScalarField Rf = resolvent_hat(sym, f, emb.eps(), true, false);
      const ScalarField Rsg = resolvent_hat(sym, g, emb.eps(), true, true);
      res = std::max(res, std::abs(inner(Rf, g) - inner(f, Rsg)) /
                              (sobolev_norm(f, Space::L2) * sobolev_norm(g, Space::L2)));
    }
    line("resolvent-K2-adjoint", k2, 1e-10, probes);
    line("oscillating-self-adjoint", self, 1e-10, probes);
    line("resolvent-adjoint", res, 1e-12, probes);
  }
  return rep;
}

std::string kernels_table(int samples) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << std::fixed << std::setprecision(6);
  os << "s chi1 chi2 chi3\n";
  for (int i = 0; i < samples; ++i) {
    const double s = -2.0 + 4.0 * i / (samples - 1);
    os << s << " " << kernel_chi(1, s) << " " << kernel_chi(2, s) << " " << kernel_chi(3, s) << "\n";
  }
  os << std::setprecision(15);
  for (int k = 1; k <= 3; ++k)
    os << "# gamma_" << k << " = " << gamma_coefficient(k) << "  integral chi_" << k << " = " << kernel_integral(k)
       << "\n";
  return os.str();
}

}  // namespace hom4
