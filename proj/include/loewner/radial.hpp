#pragma once

// Radial Loewner-Kufarev flow in the disc, driven by a family of positive
// boundary measures, and the first-order boundary variation.

#include <functional>
#include <utility>
#include <vector>

#include "loewner/circle.hpp"
#include "loewner/series.hpp"

namespace loewner {

// Positive measure on the circle: point masses plus a density (dtheta / 2pi).
struct HerglotzMeasure {
  std::vector<std::pair<double, double>> atoms;  // (theta, mass)
  FourierField density;

  static HerglotzMeasure uniform(double mass = 1.0);
  static HerglotzMeasure dirac(double theta, double mass = 1.0);

  // Raises NonpositiveMeasure for a negative atom mass.
  void validate() const;
  double total_mass() const;
  // p(z) = total_mass + 2 sum_n (int e^{-in theta} dnu) z^n, to the given order.
  TruncatedTaylor<Complex> herglotz(int order) const;
};

using MeasureFamily = std::function<HerglotzMeasure(double t)>;

struct RadialFlowOptions {
  double abs_tol = 1e-12;
  double rel_tol = 1e-12;
  double min_step = 1e-12;
};

struct RadialFlowResult {
  std::vector<double> times;
  std::vector<TruncatedTaylor<Complex>> maps;
};

// df/dt = -z f'(z) p(z, t), integrated coefficientwise by adaptive
// Dormand-Prince; maps are reported at t = 0, dt, 2dt, ..., T.
RadialFlowResult radial_flow(const TruncatedTaylor<Complex>& f0, const MeasureFamily& nu, double T, double dt,
                             const RadialFlowOptions& options = {});

// Right-hand side -z f' p of the flow at one instant.
TruncatedTaylor<Complex> radial_rhs(const TruncatedTaylor<Complex>& f, const HerglotzMeasure& nu);

// Euclidean norm of the coefficient difference between the slit equation's
// right-hand side (Dirac mass at u) and -(L_0 f + 2 sum_{n <= terms} e^{-inu} L_n f),
// with L_n f = z^{n+1} f'.
double lie_expansion_check(const TruncatedTaylor<Complex>& f, double u, int terms);

// f (1 + eps (1/2pi) int (e^{it}+z)/(e^{it}-z) delta(t) dt).
TruncatedTaylor<Complex> boundary_variation(const TruncatedTaylor<Complex>& f, const FourierField& delta,
                                            double eps_scale = 1.0);

} // namespace loewner
