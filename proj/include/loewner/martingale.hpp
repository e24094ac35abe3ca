#pragma once

// Monte Carlo drift tests for observables of the chordal SLE coefficient
// process and of one boundary point, and the (c, h) <-> kappa relation.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "loewner/circle.hpp"
#include "loewner/coeff_poly.hpp"

namespace loewner {

// c = (6 - kappa)(3 kappa - 8) / (2 kappa), h = (6 - kappa) / (2 kappa).
CentralParams ch_from_kappa(double kappa);
std::pair<Rational, Rational> ch_from_kappa_exact(const Rational& kappa);

// alpha = beta + kappa beta (beta - 1) / 4, the exponent pairs for which
// g_t'(x)^alpha (g_t(x) - W_t)^beta has zero drift.
double ito_alpha(double beta, double kappa);

struct EnsembleOptions {
  double kappa = 2;
  double T = 1;
  double dt = 1e-3;
  long paths = 100000;
  std::uint64_t seed = 1;
  int checkpoints = 10;
  int chunk = 4096;        // paths per reduction block; part of the reproducibility tuple
  int threads = 1;
  double z_crit = 4;
  double effect_size = 0;  // drift rate that must be resolvable; 0 disables the check
  double max_swallowed_fraction = 0.01;
  double localization = 0.3;   // boundary paths are stopped once g_t(x) - W_t <= localization * x; 0 disables

  void validate() const;
};

enum class Verdict { Consistent, DriftDetected };
const char* to_string(Verdict v);

struct DriftReport {
  std::string observable;
  std::vector<double> times;
  std::vector<double> mean;  // estimate of E[X_t - X_0]
  std::vector<double> se;
  std::vector<double> z;     // mean / se; +-inf when se = 0 and mean != 0
  double max_abs_z = 0;
  Verdict verdict = Verdict::Consistent;
  bool high_variance = false;  // final sd > 10 E|X_T|
  double swallowed_fraction = 0;
  double localized_fraction = 0;  // boundary paths stopped at the localization level
  EnsembleOptions options;
};

// Calibration of an ensemble: b_1(T) = 2T on every path and the z-score of
// the b_0(T)^2 mean against kappa T.
struct Calibration {
  bool b1_exact = true;
  double b0_square_mean = 0;
  double b0_square_z = 0;
  bool passed = true;
};

struct DriftSuite {
  std::vector<DriftReport> reports;
  Calibration calibration;
};

// One ensemble of coefficient paths; every observable (infinity chart) is
// evaluated on the same paths. Raises InsufficientPaths when fewer than two
// paths are requested or the final standard error cannot resolve
// options.effect_size at z_crit.
DriftSuite drift_suite(const std::vector<std::pair<std::string, CoeffPolynomial>>& observables,
                       const EnsembleOptions& options);
DriftReport drift_test(const CoeffPolynomial& P, const EnsembleOptions& options);

// M_t = g_t'(x)^alpha (g_t(x) - W_t)^beta with the piecewise-constant driving
// scheme, stopped when g_t(x) - W_t first falls to localization * x so that
// local martingales are tested through a bounded stopped process. Raises
// PathSwallowed when more than max_swallowed_fraction of the paths cross x
// before being stopped.
DriftReport observable_drift_test(double alpha, double beta, double x, const EnsembleOptions& options);

struct KernelSuiteReport {
  std::vector<DriftReport> kernel;
  DriftReport perturbed;
  Calibration calibration;
  bool all_consistent = false;
  bool perturbed_detected = false;
};

// Every element of kernel_solve(sle_generator(kappa), W) plus the non-kernel
// element b_1 - (2/kappa + perturbation) b_0^2, on one ensemble.
KernelSuiteReport kernel_martingale_suite(const Rational& kappa, int max_weight, const EnsembleOptions& options,
                                          const Rational& perturbation = Rational(1, 2));

struct RnDensityReport {
  CentralParams ch;
  double beta = 0;                        // partner exponent with alpha = h
  std::vector<double> times;
  std::vector<double> boundary_factor_mean;  // E[g_t'(x)^h]
  std::vector<double> log_factor_mean;       // E[h log g_t'(x)]
  std::vector<double> log_factor_max_abs;
  std::vector<double> schwarzian_mean;       // E[(c/6) S g_t(x)], unregularized integrand
  bool log_identically_zero = false;
  DriftReport cross_check;                // observable_drift_test(h, beta, x)
};

RnDensityReport rn_density_report(double x_A, const EnsembleOptions& options);

} // namespace loewner
