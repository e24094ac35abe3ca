#include "loewner/sle.hpp"

#include <boost/numeric/odeint.hpp>
#include <algorithm>
#include <cmath>

namespace loewner {

namespace odeint = boost::numeric::odeint;

namespace {

int step_count(double T, double dt) {
  return std::max(1, static_cast<int>(std::ceil(T / dt - 1e-9)));
}

double time_at(int j, int n, double T) { return j == n ? T : j * (T / n); }

// Root of w^2 = s in the closed upper half-plane; on the real axis the
// sign follows `reference` so that real points stay on their side.
Complex upper_sqrt(Complex s, Complex reference) {
  Complex r = std::sqrt(s);
  if (r.imag() < 0 || (r.imag() == 0 && r.real() * reference.real() < 0)) r = -r;
  return r;
}

} // namespace

std::mt19937_64 path_rng(std::uint64_t seed, std::uint64_t path) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(path), static_cast<std::uint32_t>(path >> 32)};
  return std::mt19937_64(seq);
}

Driving Driving::constant(double value) {
  return deterministic([value](double) { return value; });
}

Driving Driving::deterministic(std::function<double(double)> u) {
  Driving d;
  d.kind = Kind::Deterministic;
  d.u = std::move(u);
  return d;
}

Driving Driving::brownian(double kappa, std::uint64_t seed, double dt, std::uint64_t path) {
  Driving d;
  d.kind = Kind::Brownian;
  d.kappa = kappa;
  d.seed = seed;
  d.dt = dt;
  d.path = path;
  return d;
}

void Driving::validate() const {
  if (kind == Kind::Deterministic) {
    if (!u) fail(ErrorKind::ConfigInvalid, "deterministic driving without a function");
    return;
  }
  if (!(kappa > 0)) fail(ErrorKind::ConfigInvalid, "brownian driving needs kappa > 0");
  if (!(dt > 0)) fail(ErrorKind::ConfigInvalid, "brownian driving needs dt > 0");
}

std::vector<double> sample_driving(const Driving& driving, double T, int n_steps) {
  driving.validate();
  if (n_steps < 1 || !(T > 0)) fail(ErrorKind::ConfigInvalid, "driving needs T > 0 and at least one step");
  std::vector<double> W(static_cast<std::size_t>(n_steps) + 1);
  if (driving.kind == Driving::Kind::Deterministic) {
    for (int j = 0; j <= n_steps; ++j) W[j] = driving.u(time_at(j, n_steps, T));
    return W;
  }
  auto rng = path_rng(driving.seed, driving.path);
  std::normal_distribution<double> normal;
  double scale = std::sqrt(driving.kappa * T / n_steps);
  W[0] = 0;
  for (int j = 1; j <= n_steps; ++j) W[j] = W[j - 1] + scale * normal(rng);
  return W;
}

Complex vertical_slit_map(Complex z, double t) { return upper_sqrt(z * z + 4.0 * t, z); }

ChordalResult chordal_map(Complex z, const Driving& driving, double T, const ChordalOptions& options) {
  driving.validate();
  if (!(T >= 0)) fail(ErrorKind::ConfigInvalid, "chordal_map needs T >= 0");
  if (z.imag() < 0) fail(ErrorKind::ConfigInvalid, "chordal_map needs Im z >= 0");
  ChordalResult result{z, std::nullopt};
  if (T == 0) return result;

  if (driving.kind == Driving::Kind::Brownian) {
    int n = step_count(T, driving.dt);
    auto W = sample_driving(driving, T, n);
    double h = T / n;
    Complex g = z;
    for (int j = 1; j <= n; ++j) {
      Complex before = g - W[j - 1], x = g - W[j];
      bool crossed = g.imag() == 0 && before.real() * x.real() <= 0;
      if (std::abs(before) < options.swallow_tol || crossed) {
        result.g = g;
        result.swallow_time = time_at(j - 1, n, T);
        return result;
      }
      g = W[j] + upper_sqrt(x * x + 4.0 * h, x);
    }
    result.g = g;
    return result;
  }

  using State = std::vector<double>;
  auto system = [&](const State& x, State& dxdt, double t) {
    Complex v = 2.0 / (Complex(x[0], x[1]) - driving.u(t));
    dxdt = {v.real(), v.imag()};
  };
  auto stepper = odeint::make_controlled(options.abs_tol, options.rel_tol, odeint::runge_kutta_dopri5<State>());
  State x{z.real(), z.imag()};
  double t = 0, h = 1e-3 * std::min(T, 1.0);
  if (std::abs(z - driving.u(0)) < options.swallow_tol) {
    result.swallow_time = 0.0;
    return result;
  }
  while (t < T) {
    Complex X = Complex(x[0], x[1]) - driving.u(t);
    if (std::norm(X) < std::min(8 * h, 1e-4)) {
      // Near the branch point g = W the flow is locally the frozen-driving
      // map X^2 -> X^2 + 4s; step through it in closed form.
      double s = std::min(T - t, std::max(std::norm(X) / 8, options.min_step));
      double W = driving.u(t + s / 2);
      Complex Y = Complex(x[0], x[1]) - W;
      double closest = std::clamp(-(Y * Y).real() / 4, 0.0, s);
      if (std::sqrt(std::abs(Y * Y + 4.0 * closest)) < options.swallow_tol) {
        result.g = W + upper_sqrt(Y * Y + 4.0 * closest, Y);
        result.swallow_time = t + closest;
        return result;
      }
      Complex g = W + upper_sqrt(Y * Y + 4.0 * s, Y);
      x = {g.real(), g.imag()};
      t = s == T - t ? T : t + s;
      stepper.reset();
      continue;
    }
    double trial = std::min(h, T - t);
    bool reached_end = trial == T - t;
    if (stepper.try_step(system, x, t, trial) == odeint::success) {
      if (reached_end) t = T;
      if (std::abs(Complex(x[0], x[1]) - driving.u(t)) < options.swallow_tol) {
        result.g = Complex(x[0], x[1]);
        result.swallow_time = t;
        return result;
      }
    } else if (trial < options.min_step) {
      fail(ErrorKind::SwallowTolUnreachable, "step floor reached before the swallow tolerance");
    }
    h = trial;
  }
  result.g = Complex(x[0], x[1]);
  return result;
}

std::vector<TracePoint> sle_trace(const Driving& driving, double T, int n_steps) {
  auto W = sample_driving(driving, T, n_steps);
  double h = T / n_steps;
  std::vector<TracePoint> trace;
  trace.push_back({0, 0.0, Complex(W[0], 0.0)});
  for (int k = 1; k <= n_steps; ++k) {
    Complex z = W[k];
    for (int j = k; j >= 1; --j) {
      Complex x = z - W[j];
      z = W[j] + upper_sqrt(x * x - 4.0 * h, x);
    }
    trace.push_back({k, time_at(k, n_steps, T), z});
  }
  return trace;
}

std::vector<double> hierarchy_drift(const std::vector<double>& b) {
  int N = static_cast<int>(b.size()) - 1;
  std::vector<double> p(static_cast<std::size_t>(std::max(N, 1)) + 1, 0.0);
  p[1] = 1;
  for (int k = 2; k <= N; ++k) {
    double acc = 0;
    for (int i = 0; i <= k - 2; ++i) acc += b[i] * p[k - 1 - i];
    p[k] = -acc;
  }
  return p;
}

CoeffHierarchy::CoeffHierarchy(int N, double W0)
    : b_(static_cast<std::size_t>(N) + 1, 0.0), p_(static_cast<std::size_t>(N) + 1, 0.0) {
  if (N < 1) fail(ErrorKind::ConfigInvalid, "coefficient hierarchy needs N >= 1");
  b_[0] = -W0;
}

void CoeffHierarchy::step(double W_next, double t_next) {
  double h = t_next - t_;
  int N = static_cast<int>(b_.size()) - 1;
  p_[1] = 1;
  for (int k = 2; k <= N; ++k) {
    double acc = 0;
    for (int i = 0; i <= k - 2; ++i) acc += b_[i] * p_[k - 1 - i];
    p_[k] = -acc;
  }
  for (int n = 2; n <= N; ++n) b_[n] += 2 * p_[n] * h;
  b_[0] = -W_next;
  b_[1] = 2 * t_next;
  t_ = t_next;
}

SlePath coeff_hierarchy(const Driving& driving, int N, double T, int stride) {
  if (stride < 1) fail(ErrorKind::ConfigInvalid, "stride must be positive");
  double dt = driving.kind == Driving::Kind::Brownian ? driving.dt : driving.dt > 0 ? driving.dt : 1e-3;
  int n = step_count(T, dt);
  auto W = sample_driving(driving, T, n);
  SlePath path;
  path.kappa = driving.kind == Driving::Kind::Brownian ? driving.kappa : 0.0;
  path.seed = driving.seed;
  path.dt = T / n;
  CoeffHierarchy state(N, W[0]);
  path.times.push_back(0);
  path.W.push_back(W[0]);
  path.b.push_back(state.b());
  for (int j = 1; j <= n; ++j) {
    state.step(W[j], time_at(j, n, T));
    if (j % stride == 0 || j == n) {
      path.times.push_back(state.t());
      path.W.push_back(W[j]);
      path.b.push_back(state.b());
    }
  }
  return path;
}

CoeffPolynomial hierarchy_drift_polynomial(int k) {
  if (k < 1) fail(ErrorKind::ConfigInvalid, "drift polynomials start at k = 1");
  std::vector<CoeffPolynomial> p(static_cast<std::size_t>(k) + 1, CoeffPolynomial(Chart::Infinity));
  p[1] = CoeffPolynomial::constant(Chart::Infinity, 1);
  for (int m = 2; m <= k; ++m) {
    CoeffPolynomial acc(Chart::Infinity);
    for (int i = 0; i <= m - 2; ++i) acc -= CoeffPolynomial::coordinate(Chart::Infinity, i) * p[m - 1 - i];
    p[m] = acc;
  }
  return p[k];
}

LinearCoeffOperator infinity_lminus1(int N) {
  LinearCoeffOperator op(Chart::Infinity, N + 1);
  op.add_term(CoeffPolynomial::constant(Chart::Infinity, -1), {0});
  return op;
}

LinearCoeffOperator infinity_lminus2(int N) {
  LinearCoeffOperator op(Chart::Infinity, N + 1);
  for (int k = 1; k <= N; ++k) op.add_term(Rational(-1) * hierarchy_drift_polynomial(k), {k});
  return op;
}

LinearCoeffOperator sle_generator(const Rational& kappa, int N) {
  if (sgn(kappa) <= 0) fail(ErrorKind::ConfigInvalid, "sle_generator needs kappa > 0");
  LinearCoeffOperator op(Chart::Infinity, N + 1);
  op.add_term(CoeffPolynomial::constant(Chart::Infinity, kappa / 2), {0, 0});
  for (int k = 1; k <= N; ++k) op.add_term(Rational(2) * hierarchy_drift_polynomial(k), {k});
  return op;
}

double one_point_generator_coefficient(double kappa, double a) { return 0.5 * kappa * a * (a - 1) + 2 * a; }

std::pair<double, double> one_point_kernel_exponents(double kappa) {
  if (!(kappa > 0)) fail(ErrorKind::ConfigInvalid, "kappa must be positive");
  return {0.0, 1.0 - 4.0 / kappa};
}

} // namespace loewner
