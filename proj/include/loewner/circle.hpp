#pragma once

// Vector fields on the circle in the real trigonometric basis and the
// Virasoro-type forms built from them.

#include <vector>

#include "loewner/series.hpp"

namespace loewner {

// v(t) = a[0] + sum_{k=1}^M a[k] cos kt + b[k] sin kt; b[0] is ignored.
struct FourierField {
  std::vector<double> a;
  std::vector<double> b;

  FourierField() : a(1, 0.0), b(1, 0.0) {}
  explicit FourierField(int modes) : a(modes + 1, 0.0), b(modes + 1, 0.0) {}
  FourierField(std::vector<double> cosine, std::vector<double> sine);

  int modes() const { return static_cast<int>(a.size()) - 1; }
  static FourierField cosine(int k, double amplitude = 1.0);
  static FourierField sine(int k, double amplitude = 1.0);

  double operator()(double t) const;
  double derivative_at(double t) const;
  double max_abs_diff(const FourierField& other) const;
};

FourierField operator+(const FourierField& x, const FourierField& y);
FourierField operator-(const FourierField& x, const FourierField& y);
FourierField operator*(double s, const FourierField& x);

struct CentralParams {
  double c = 0;
  double h = 0;
};

FourierField hilbert_transform(const FourierField& f);

// Requires a[0] == 0; raises NonzeroMean otherwise.
FourierField complex_structure_J(const FourierField& v);

// [v1, v2] = v1 v2' - v1' v2, exact; the result has modes(v1) + modes(v2).
FourierField bracket(const FourierField& v1, const FourierField& v2);

// (1/2pi) int ((2h - c/12) v1' - (c/12) v1''') v2 dt, by orthogonality.
double omega_ch(const FourierField& v1, const FourierField& v2, const CentralParams& p);

// w(u, v) = omega(u, J v).
double kahler_form(const FourierField& u, const FourierField& v, const CentralParams& p);

// 2hk + (c/12)(k^3 - k); k >= 1.
double kahler_metric_coeff(int k, const CentralParams& p);

// Exponent -(1/6pi) oint (phi *dphi / 2 + phi |dz|) with *dphi realized by
// the multiplier |k|: -(1/12) sum k (a_k^2 + b_k^2) - a_0 / 3.
double polyakov_alvarez(const FourierField& phi);

struct BoundaryTrace {
  FourierField phi;  // log|f'(e^{it})|
  int grid = 0;      // number of samples used
  double tail_energy_fraction = 0;
};

// Samples log|f'| on a uniform grid, starting at the smallest power of two
// >= max(4N, 16) and doubling until the energy in modes |k| >= grid/4 is at
// most 1e-8 of the total. A positive `grid` fixes the size instead.
BoundaryTrace boundary_log_derivative(const TruncatedTaylor<Complex>& f, int grid = 0, int max_grid = 1 << 20);

struct PolyakovAlvarezResult {
  double exponent = 0;
  int grid = 0;
};

PolyakovAlvarezResult polyakov_alvarez(const TruncatedTaylor<Complex>& f, int grid = 0);

} // namespace loewner
