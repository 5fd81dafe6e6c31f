// SPDX-License-Identifier: Apache-2.0
#include "smoothing.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>

#include "errors.hpp"

namespace hom4 {
namespace {

double sinc(double t) {
  if (std::abs(t) < 1e-4) {
    const double t2 = t * t;
    return 1.0 - t2 / 6.0 + t2 * t2 / 120.0;
  }
  return std::sin(t) / t;
}

void require_order(int k) {
  if (k < 1 || k > 3) throw Error(ErrorCode::UnsupportedOrder, "smoothing kernels exist for k = 1, 2, 3");
}

// 8-point Gauss-Legendre on [-1, 1]: exact for polynomials of degree 15.
constexpr double kGaussX[8] = {-0.9602898564975363, -0.7966664774136267, -0.5255324099163290, -0.1834346424956498,
                               0.1834346424956498,  0.5255324099163290,  0.7966664774136267,  0.9602898564975363};
constexpr double kGaussW[8] = {0.1012285362903763, 0.2223810344533745, 0.3137066458778873, 0.3626837833783620,
                               0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763};

double integrate_kernel(int k, const std::function<double(double)>& weight) {
  require_order(k);
  // The kernels are polynomial between consecutive half-integers.
  double acc = 0.0;
  for (int piece = -4; piece < 4; ++piece) {
    const double a = 0.5 * piece;
    const double b = a + 0.5;
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    for (int g = 0; g < 8; ++g) {
      const double s = mid + half * kGaussX[g];
      acc += half * kGaussW[g] * weight(s) * kernel_chi(k, s);
    }
  }
  return acc;
}

// ---------------------------------------------------------------------------
// Random test data for the inequality suite.

constexpr int kSuiteDim = 2;
constexpr int kSuitePoints = 128;

const GridSpec& suite_grid() {
  static const GridSpec g{kSuiteDim, kSuitePoints, 1.0};
  return g;
}

// Random trigonometric polynomial with modes stride * j, |j_i| <= band.
ScalarField random_poly(std::mt19937_64& rng, int band, int stride, bool zero_mean) {
  const GridSpec& g = suite_grid();
  std::normal_distribution<double> normal(0.0, 1.0);
  Spectrum s(g.size(), Complex(0.0));
  for (int j0 = -band; j0 <= band; ++j0)
    for (int j1 = -band; j1 <= band; ++j1) {
      if (zero_mean && j0 == 0 && j1 == 0) continue;
      const double decay = 1.0 / (1.0 + j0 * j0 + j1 * j1);
      const Complex c(normal(rng) * decay, normal(rng) * decay);
      auto modes = ModeTable::get(g.dim, g.points);
      s[modes->slot({stride * j0, stride * j1, 0})] = c;
    }
  return ScalarField::from_spectrum(g, std::move(s));
}

double l2(const ScalarField& u) { return sobolev_norm(u, Space::L2); }

// ||grad^m u|| = (sum |xi|^(2m) |u_k|^2)^(1/2) over the torus.
double grad_norm(const ScalarField& u, int m) {
  const GridSpec& g = u.grid();
  auto modes = ModeTable::get(g.dim, g.points);
  double acc = 0.0;
  for (std::size_t l = 0; l < g.size(); ++l) {
    const RealVec xi = wavevector(modes->k(l), g.period);
    const double x2 = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
    acc += std::pow(x2, m) * std::norm(u.spectrum()[l]);
  }
  return std::sqrt(g.volume() * acc);
}

// Nodewise product; inputs are band-limited so that the product is exact.
ScalarField times(const ScalarField& u, const ScalarField& v) { return pointwise_product(u, v, false); }

// Cell average of a 1/eps-periodic field = its torus mean.
double cell_mean(const ScalarField& u) { return u.mean(); }

struct Tracker {
  InequalityCheck check;
  void record(double lhs, double rhs, const std::string& input) {
    ++check.trials;
    const double ratio = rhs > 0.0 ? lhs / rhs : (lhs > 1e-14 ? INFINITY : 0.0);
    if (ratio > check.worst_ratio || check.worst_input.empty()) {
      check.worst_ratio = std::max(check.worst_ratio, ratio);
      check.worst_input = input;
    }
  }
};

}  // namespace

double steklov_symbol(int k, double eps, const RealVec& xi, int dim) {
  if (k < 1) throw Error(ErrorCode::BadArgument, "smoothing order must be >= 1");
  double m = 1.0;
  for (int j = 0; j < dim; ++j) m *= std::pow(sinc(0.5 * eps * xi[j]), k);
  return m;
}

double steklov_multiplier(int k, double eps, const IntVec& freq, int dim, double period) {
  return steklov_symbol(k, eps, wavevector(freq, period), dim);
}

ScalarField apply_smoothing(const ScalarField& u, const SmoothingSpec& spec) {
  const int dim = u.grid().dim;
  return apply_multiplier(
      u, [&](const RealVec& xi, const IntVec&, bool) { return steklov_symbol(spec.order, spec.eps, xi, dim); });
}

double kernel_chi(int k, double s) {
  require_order(k);
  const double a = std::abs(s);
  switch (k) {
    case 1: return (s >= -0.5 && s < 0.5) ? 1.0 : 0.0;
    case 2: return a <= 1.0 ? 1.0 - a : 0.0;
    default:
      if (a <= 0.5) return 0.75 - s * s;
      if (a < 1.5) return 0.5 * (a - 1.5) * (a - 1.5);
      return 0.0;
  }
}

double kernel_integral(int k) {
  return integrate_kernel(k, [](double) { return 1.0; });
}

double gamma_coefficient(int k) {
  return 0.5 * integrate_kernel(k, [](double s) { return s * s; });
}

bool InequalityReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const InequalityCheck& c) { return c.worst_ratio <= 1.0; });
}

InequalityReport check_inequality_suite(std::uint64_t seed, int trials) {
  if (trials < 1) throw Error(ErrorCode::BadArgument, "inequality suite needs at least one trial");
  constexpr double C = 100.0;
  const double sqrt_d_half = std::sqrt(static_cast<double>(kSuiteDim)) / 2.0;
  auto make = [](const char* id, const char* statement, double c) {
    Tracker t;
    t.check.id = id;
    t.check.statement = statement;
    t.check.constant = c;
    return t;
  };
  std::vector<Tracker> tr;
  tr.push_back(make("smoothing-contraction", "||S phi|| <= ||phi||", 1.0));
  tr.push_back(make("smoothing-first-order", "||S phi - phi|| <= (sqrt(d)/2) eps ||grad phi||", sqrt_d_half));
  tr.push_back(make("oscillating-multiplier", "||b_eps S phi|| <= <b^2>^1/2 ||phi||", 1.0));
  tr.push_back(make("mean-zero-pairing", "|(b_eps S phi, psi)| <= C eps <b^2>^1/2 ||phi|| ||grad psi||", C));
  tr.push_back(make("orthogonal-pair",
                    "|(alpha_eps S phi, beta_eps S psi)| <= C eps^2 |alpha||beta| ||grad phi|| ||grad psi||", C));
  tr.push_back(make("pair-average",
                    "|(alpha_eps S phi, beta_eps S psi) - <alpha beta>(phi,psi)| <= C eps |alpha||beta| ||phi|| "
                    "||grad psi||",
                    C));
  tr.push_back(make("kernel-derivative", "||S^k d_i phi|| <= C eps^-1 ||phi||, k = 2, 3", C));
  tr.push_back(make("oscillating-kernel-derivative", "||b_eps S^k d_i phi|| <= C eps^-1 <b^2>^1/2 ||phi||", C));
  tr.push_back(make("iterate-derivative",
                    "|(alpha_eps S^3 d_i phi, beta_eps S psi) - <alpha beta>(S^2 d_i phi, psi)| <= C |alpha||beta| "
                    "||phi|| ||grad psi||",
                    C));
  tr.push_back(make("iterate-taylor", "||S^k phi - phi - eps^2 gamma_k Lap phi|| <= C eps^4 ||grad^4 phi||", C));

  std::mt19937_64 rng(seed);
  const int ns[3] = {2, 4, 8};
  for (int trial = 0; trial < trials; ++trial) {
    const int n = ns[trial % 3];
    const double eps = 1.0 / n;
    std::ostringstream tag;
    tag << "seed=" << seed << " trial=" << trial << " eps=1/" << n;
    const std::string input = tag.str();

    const ScalarField phi = random_poly(rng, 4, 1, false);
    const ScalarField psi = random_poly(rng, 4, 1, false);
    const ScalarField b = random_poly(rng, 2, n, false);
    const ScalarField b0 = random_poly(rng, 2, n, true);
    const ScalarField alpha = random_poly(rng, 2, n, false);
    ScalarField beta = random_poly(rng, 2, n, false);
    const int axis = trial % kSuiteDim;

    auto S = [&](const ScalarField& u, int k) { return apply_smoothing(u, {k, eps}); };
    auto rms = [](const ScalarField& u) { return std::sqrt(cell_mean(times(u, u))); };
    const ScalarField Sphi = S(phi, 1);
    const ScalarField Spsi = S(psi, 1);
    const int ax[1] = {axis};
    const ScalarField dphi = derivative_along(phi, ax);

    tr[0].record(l2(Sphi), l2(phi), input);
    tr[1].record(l2(Sphi - phi), sqrt_d_half * eps * grad_norm(phi, 1), input);
    tr[2].record(l2(times(b, Sphi)), rms(b) * l2(phi), input);
    tr[3].record(std::abs(inner(times(b0, Sphi), psi)), C * eps * rms(b0) * l2(phi) * grad_norm(psi, 1), input);

    // pair-average on the raw pair, then orthogonalize beta against alpha
    const double ab = cell_mean(times(alpha, beta));
    tr[5].record(std::abs(inner(times(alpha, Sphi), times(beta, Spsi)) - ab * inner(phi, psi)),
                 C * eps * rms(alpha) * rms(beta) * l2(phi) * grad_norm(psi, 1), input);
    const ScalarField beta_perp = beta - (ab / cell_mean(times(alpha, alpha))) * alpha;
    tr[4].record(std::abs(inner(times(alpha, Sphi), times(beta_perp, Spsi))),
                 C * eps * eps * rms(alpha) * rms(beta_perp) * grad_norm(phi, 1) * grad_norm(psi, 1), input);

    for (int k = 2; k <= 3; ++k) {
      const ScalarField Sk = S(dphi, k);
      tr[6].record(l2(Sk), C / eps * l2(phi), input);
      tr[7].record(l2(times(b, Sk)), C / eps * rms(b) * l2(phi), input);
    }
    tr[8].record(std::abs(inner(times(alpha, S(dphi, 3)), times(beta, Spsi)) - ab * inner(S(dphi, 2), psi)),
                 C * rms(alpha) * rms(beta) * l2(phi) * grad_norm(psi, 1), input);

    for (int k = 1; k <= 3; ++k) {
      const double gk = gamma_coefficient(k);
      const ScalarField lap = apply_multiplier(phi, [](const RealVec& xi, const IntVec&, bool) {
        return -(xi[0] * xi[0] + xi[1] * xi[1]);
      });
      const ScalarField rem = S(phi, k) - phi - (eps * eps * gk) * lap;
      tr[9].record(l2(rem), C * std::pow(eps, 4) * grad_norm(phi, 4), input);
    }
  }
  InequalityReport rep;
  for (auto& t : tr) rep.checks.push_back(t.check);
  return rep;
}

void require_passed(const InequalityReport& report) {
  for (const auto& c : report.checks)
    if (!(c.worst_ratio <= 1.0)) {
      std::ostringstream os;
      os << c.id << " (" << c.statement << ") worst ratio " << c.worst_ratio << " at " << c.worst_input;
      throw Error(ErrorCode::PropertyViolation, os.str());
    }
}

}  // namespace hom4
