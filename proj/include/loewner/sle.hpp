#pragma once

// Chordal Loewner flows in the upper half-plane: deterministic and Brownian
// driving, traces, the coefficient hierarchy of g_t - W_t at infinity and its
// generator on coordinate polynomials.

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <vector>

#include "loewner/coeff_poly.hpp"
#include "loewner/scalar.hpp"

namespace loewner {

// Independent stream for one Monte Carlo path.
std::mt19937_64 path_rng(std::uint64_t seed, std::uint64_t path);

struct Driving {
  enum class Kind { Deterministic, Brownian };
  Kind kind = Kind::Deterministic;
  std::function<double(double)> u;  // deterministic driving function
  double kappa = 0;
  std::uint64_t seed = 0;
  std::uint64_t path = 0;
  double dt = 1e-3;

  static Driving constant(double value);
  static Driving deterministic(std::function<double(double)> u);
  static Driving brownian(double kappa, std::uint64_t seed, double dt, std::uint64_t path = 0);

  void validate() const;
};

// W at t_j = j T / n for j = 0..n. Brownian samples are sqrt(kappa) B_t from
// the (seed, path) stream.
std::vector<double> sample_driving(const Driving& driving, double T, int n_steps);

struct ChordalOptions {
  double swallow_tol = 1e-6;
  double min_step = 1e-12;
  double abs_tol = 1e-12;
  double rel_tol = 1e-12;
};

struct ChordalResult {
  Complex g;                           // g_T(z), or g at the swallowing time
  std::optional<double> swallow_time;  // set once, never revised
};

// dg/dt = 2 / (g - W_t), g_0(z) = z. Deterministic driving uses adaptive
// Dormand-Prince; Brownian driving uses the exact flow of each
// piecewise-constant step of length driving.dt.
ChordalResult chordal_map(Complex z, const Driving& driving, double T, const ChordalOptions& options = {});

// sqrt(z^2 + 4t), the W = 0 solution, on the branch with Im >= 0.
Complex vertical_slit_map(Complex z, double t);

struct TracePoint {
  int step;
  double t;
  Complex point;
};

// gamma(t_k) = g_{t_k}^{-1}(W_k), by composing the inverse slit maps
// z -> W_j + sqrt((z - W_j)^2 - 4 dt) backwards from j = k.
std::vector<TracePoint> sle_trace(const Driving& driving, double T, int n_steps);

// Coefficients b_0..b_N of g_t(z) - W_t = z + b_0 + b_1/z + ...
// p_1 = 1, p_k = -sum_{i=0}^{k-2} b_i p_{k-1-i}.
std::vector<double> hierarchy_drift(const std::vector<double>& b);

// Euler stepping of db_n = 2 p_n dt with b_0 = -W_t and b_1 = 2t set exactly.
class CoeffHierarchy {
public:
  explicit CoeffHierarchy(int N, double W0 = 0);
  void step(double W_next, double t_next);
  const std::vector<double>& b() const { return b_; }
  double t() const { return t_; }

private:
  std::vector<double> b_;
  std::vector<double> p_;
  double t_ = 0;
};

struct SlePath {
  double kappa = 0;
  std::uint64_t seed = 0;
  double dt = 0;
  std::vector<double> times;
  std::vector<double> W;
  std::vector<std::vector<double>> b;
};

// Records every `stride`-th step and the final one.
SlePath coeff_hierarchy(const Driving& driving, int N, double T, int stride = 1);

// p_k as a polynomial in b_0..b_{k-2} (infinity chart).
CoeffPolynomial hierarchy_drift_polynomial(int k);

// L_{-1} = -d/db_0 and L_{-2} = -sum_{k=1}^N p_k d/db_k on b_0..b_N.
LinearCoeffOperator infinity_lminus1(int N);
LinearCoeffOperator infinity_lminus2(int N);

// (kappa/2) L_{-1}^2 - 2 L_{-2} = (kappa/2) d^2/db_0^2 + 2 sum p_k d/db_k.
LinearCoeffOperator sle_generator(const Rational& kappa, int N);

// Coefficient of x^{a-2} in ((kappa/2) l_{-1}^2 - 2 l_{-2}) x^a with
// l_n = -x^{n+1} d/dx.
double one_point_generator_coefficient(double kappa, double a);
// The two exponents killed by the one-point generator: 0 and 1 - 4/kappa.
std::pair<double, double> one_point_kernel_exponents(double kappa);

} // namespace loewner
