#include "loewner/radial.hpp"

#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <numbers>

#include "loewner/virasoro.hpp"

namespace loewner {

namespace odeint = boost::numeric::odeint;

namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;

// Herglotz coefficients of a signed density: a_0, then a_n - i b_n.
TruncatedTaylor<Complex> density_transform(const FourierField& v, int order) {
  auto p = TruncatedTaylor<Complex>::zero(order);
  p[0] = v.a[0];
  for (int n = 1; n <= std::min(order, v.modes()); ++n) p[n] = Complex(v.a[n], -v.b[n]);
  return p;
}

} // namespace

HerglotzMeasure HerglotzMeasure::uniform(double mass) {
  HerglotzMeasure m;
  m.density = FourierField::cosine(0, mass);
  return m;
}

HerglotzMeasure HerglotzMeasure::dirac(double theta, double mass) {
  HerglotzMeasure m;
  m.atoms.emplace_back(theta, mass);
  return m;
}

void HerglotzMeasure::validate() const {
  for (const auto& [theta, mass] : atoms) {
    if (!(mass >= 0)) fail(ErrorKind::NonpositiveMeasure, "atom with negative mass");
    if (!std::isfinite(theta)) fail(ErrorKind::ConfigInvalid, "atom angle is not finite");
  }
}

double HerglotzMeasure::total_mass() const {
  double m = density.a[0];
  for (const auto& atom : atoms) m += atom.second;
  return m;
}

TruncatedTaylor<Complex> HerglotzMeasure::herglotz(int order) const {
  validate();
  auto p = density_transform(density, order);
  for (const auto& [theta, mass] : atoms) {
    double th = std::fmod(theta, kTwoPi);
    p[0] += mass;
    for (int n = 1; n <= order; ++n) p[n] += 2.0 * mass * std::polar(1.0, -n * th);
  }
  return p;
}

TruncatedTaylor<Complex> radial_rhs(const TruncatedTaylor<Complex>& f, const HerglotzMeasure& nu) {
  int N = f.order();
  auto p = nu.herglotz(N);
  auto out = TruncatedTaylor<Complex>::zero(N);
  for (int k = 1; k <= N; ++k) {
    Complex acc{};
    for (int j = 0; j < k; ++j) acc += p[j] * double(k - j) * f[k - j];
    out[k] = -acc;
  }
  return out;
}

RadialFlowResult radial_flow(const TruncatedTaylor<Complex>& f0, const MeasureFamily& nu, double T, double dt,
                             const RadialFlowOptions& options) {
  if (!(T >= 0) || !(dt > 0)) fail(ErrorKind::ConfigInvalid, "radial_flow needs T >= 0 and dt > 0");
  int N = f0.order();
  using State = std::vector<double>;
  auto pack = [N](const TruncatedTaylor<Complex>& f) {
    State x(2 * (N + 1));
    for (int k = 0; k <= N; ++k) x[2 * k] = f[k].real(), x[2 * k + 1] = f[k].imag();
    return x;
  };
  auto unpack = [N](const State& x) {
    auto f = TruncatedTaylor<Complex>::zero(N);
    for (int k = 0; k <= N; ++k) f[k] = Complex(x[2 * k], x[2 * k + 1]);
    return f;
  };
  auto system = [&](const State& x, State& dxdt, double t) {
    dxdt = pack(radial_rhs(unpack(x), nu(t)));
  };

  auto stepper = odeint::make_controlled(options.abs_tol, options.rel_tol, odeint::runge_kutta_dopri5<State>());
  RadialFlowResult result;
  State x = pack(f0);
  double t = 0;
  result.times.push_back(0);
  result.maps.push_back(f0);
  double h = std::min(dt, 1e-3);
  long samples = static_cast<long>(std::floor(T / dt + 1e-9));
  std::vector<double> targets;
  for (long j = 1; j <= samples; ++j) targets.push_back(j * dt);
  if (targets.empty() ? T > 0 : targets.back() < T - 1e-12) targets.push_back(T);
  for (double target : targets) {
    while (t < target) {
      double trial = std::min(h, target - t);
      bool reached_end = trial == target - t;
      auto res = stepper.try_step(system, x, t, trial);
      if (res == odeint::success) {
        if (reached_end) t = target;
        h = trial;
      } else {
        if (trial < options.min_step) fail(ErrorKind::StepRejected, "adaptive step fell below the floor");
        h = trial;
      }
    }
    result.times.push_back(target);
    result.maps.push_back(unpack(x));
  }
  return result;
}

double lie_expansion_check(const TruncatedTaylor<Complex>& f, double u, int terms) {
  auto rhs = radial_rhs(f, HerglotzMeasure::dirac(u));
  auto expansion = witt_lie_field(0, f);
  for (int n = 1; n <= terms; ++n) expansion = expansion + 2.0 * std::polar(1.0, -n * u) * witt_lie_field(n, f);
  double s = 0;
  for (int k = 0; k <= f.order(); ++k) s += std::norm(rhs[k] + expansion[k]);
  return std::sqrt(s);
}

TruncatedTaylor<Complex> boundary_variation(const TruncatedTaylor<Complex>& f, const FourierField& delta,
                                            double eps_scale) {
  auto H = density_transform(delta, f.order());
  return f + Complex(eps_scale) * mul(f, H);
}

} // namespace loewner
