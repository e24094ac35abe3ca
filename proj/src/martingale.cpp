#include "loewner/martingale.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>
#include <thread>

#include "loewner/sle.hpp"
#include "loewner/virasoro.hpp"

namespace loewner {

namespace {

struct Grid {
  long steps = 0;
  double h = 0;
  std::vector<long> checkpoint_steps;
  std::vector<double> times;
};

Grid make_grid(const EnsembleOptions& o) {
  Grid g;
  g.steps = std::max(1L, static_cast<long>(std::ceil(o.T / o.dt - 1e-9)));
  g.h = o.T / g.steps;
  for (int i = 1; i <= o.checkpoints; ++i) {
    long s = std::max(1L, static_cast<long>(std::llround(double(i) * g.steps / o.checkpoints)));
    g.checkpoint_steps.push_back(s);
    g.times.push_back(s == g.steps ? o.T : s * g.h);
  }
  return g;
}

// Per-slot mean and centered second moment (Welford updates, pairwise
// merges); chunks are reduced in index order.
struct Moments {
  std::vector<double> mean, m2, sabs;
  long count = 0;
  long swallowed = 0;
  std::vector<double> extra;  // ensemble-specific sums
  std::vector<double> peak;   // per-slot running maxima

  Moments(std::size_t slots, std::size_t extras)
      : mean(slots, 0.0), m2(slots, 0.0), sabs(slots, 0.0), extra(extras, 0.0), peak(slots, 0.0) {}

  // Adds the current path's value; call finish_path() after all slots.
  void add(std::size_t slot, double value, double magnitude) {
    double n = static_cast<double>(count + 1);
    double delta = value - mean[slot];
    mean[slot] += delta / n;
    m2[slot] += delta * (value - mean[slot]);
    sabs[slot] += magnitude;
  }
  void finish_path() { ++count; }

  void merge(const Moments& o) {
    double na = static_cast<double>(count), nb = static_cast<double>(o.count), n = na + nb;
    for (std::size_t i = 0; i < mean.size() && n > 0; ++i) {
      double delta = o.mean[i] - mean[i];
      mean[i] += delta * nb / n;
      m2[i] += o.m2[i] + delta * delta * na * nb / n;
      sabs[i] += o.sabs[i];
    }
    for (std::size_t i = 0; i < peak.size(); ++i) peak[i] = std::max(peak[i], o.peak[i]);
    for (std::size_t i = 0; i < extra.size(); ++i) extra[i] += o.extra[i];
    count += o.count;
    swallowed += o.swallowed;
  }
};

// Runs `path_fn(path, moments)` over all paths, chunk by chunk, and reduces
// the chunk results in chunk order so the outcome does not depend on threads.
template <class PathFn>
Moments run_ensemble(const EnsembleOptions& o, std::size_t slots, std::size_t extras, PathFn path_fn) {
  long chunks = (o.paths + o.chunk - 1) / o.chunk;
  std::vector<Moments> partial(static_cast<std::size_t>(chunks), Moments(slots, extras));
  std::atomic<long> next{0};
  auto worker = [&] {
    for (long c = next++; c < chunks; c = next++) {
      long begin = c * o.chunk, end = std::min(o.paths, begin + o.chunk);
      for (long p = begin; p < end; ++p) path_fn(static_cast<std::uint64_t>(p), partial[c]);
    }
  };
  int threads = std::max(1, o.threads);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  Moments total(slots, extras);
  for (const auto& m : partial) total.merge(m);
  return total;
}

DriftReport finish_report(const std::string& name, const Moments& m, std::size_t offset, const Grid& grid,
                          const EnsembleOptions& o) {
  DriftReport r;
  r.observable = name;
  r.times = grid.times;
  r.options = o;
  double n = static_cast<double>(m.count);
  for (std::size_t i = 0; i < grid.times.size(); ++i) {
    double mean = m.mean[offset + i];
    double var = n > 1 ? m.m2[offset + i] / (n - 1) : 0.0;
    double se = std::sqrt(var / n);
    double z = se > 0 ? mean / se : mean == 0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), mean);
    r.mean.push_back(mean);
    r.se.push_back(se);
    r.z.push_back(z);
    r.max_abs_z = std::max(r.max_abs_z, std::abs(z));
  }
  r.verdict = r.max_abs_z > o.z_crit ? Verdict::DriftDetected : Verdict::Consistent;
  std::size_t last = offset + grid.times.size() - 1;
  double sd_final = r.se.back() * std::sqrt(n);
  r.high_variance = sd_final > 10 * (m.sabs[last] / n);
  double total = n + static_cast<double>(m.swallowed);
  r.swallowed_fraction = total > 0 ? m.swallowed / total : 0.0;
  if (o.effect_size > 0 && o.z_crit * r.se.back() > o.effect_size * o.T)
    fail(ErrorKind::InsufficientPaths, "standard error too large to resolve the effect size for " + name);
  return r;
}

// Polynomial in b_0..b_N prepared for fast floating evaluation.
struct CompiledPolynomial {
  std::vector<std::pair<double, Exponents>> terms;

  explicit CompiledPolynomial(const CoeffPolynomial& P) {
    for (const auto& [e, c] : P.terms()) terms.emplace_back(c.get_d(), e);
  }
  double operator()(const std::vector<double>& b) const {
    double acc = 0;
    for (const auto& [c, e] : terms) {
      double v = c;
      for (std::size_t s = 0; s < e.size(); ++s)
        for (int k = 0; k < e[s]; ++k) v *= b[s];
      acc += v;
    }
    return acc;
  }
};

// One boundary point under the piecewise-constant driving scheme, with the
// 3-jet of g_t at x. A stopped path reports its frozen state at every later
// checkpoint.
struct BoundaryJet {
  double X, g1 = 1, g2 = 0, g3 = 0;
};

enum class PathFate { Survived, Localized, Swallowed };

template <class Checkpoint>
PathFate simulate_boundary(double x, std::uint64_t path, const EnsembleOptions& o, const Grid& grid, bool jets,
                       Checkpoint at_checkpoint) {
  auto rng = path_rng(o.seed, path);
  std::normal_distribution<double> normal;
  double scale = std::sqrt(o.kappa * grid.h);
  BoundaryJet j{x};
  double floor = o.localization * x;
  std::size_t next_cp = 0;
  for (long step = 1; step <= grid.steps; ++step) {
    double Y = j.X - scale * normal(rng);
    if (Y <= 0) return PathFate::Swallowed;
    double R = std::sqrt(Y * Y + 4 * grid.h);
    double d1 = Y / R;
    if (jets) {
      double d2 = 4 * grid.h / (R * R * R);
      double d3 = -12 * grid.h * Y / (R * R * R * R * R);
      double n3 = d3 * j.g1 * j.g1 * j.g1 + 3 * d2 * j.g1 * j.g2 + d1 * j.g3;
      double n2 = d2 * j.g1 * j.g1 + d1 * j.g2;
      j.g3 = n3;
      j.g2 = n2;
    }
    j.g1 *= d1;
    j.X = R;
    if (next_cp < grid.checkpoint_steps.size() && step == grid.checkpoint_steps[next_cp]) at_checkpoint(next_cp++, j);
    if (j.X <= floor) {
      while (next_cp < grid.checkpoint_steps.size()) at_checkpoint(next_cp++, j);
      return PathFate::Localized;
    }
  }
  return PathFate::Survived;
}

} // namespace

CentralParams ch_from_kappa(double kappa) {
  if (!(kappa > 0)) fail(ErrorKind::ConfigInvalid, "kappa must be positive");
  return {(6 - kappa) * (3 * kappa - 8) / (2 * kappa), (6 - kappa) / (2 * kappa)};
}

std::pair<Rational, Rational> ch_from_kappa_exact(const Rational& kappa) {
  if (sgn(kappa) <= 0) fail(ErrorKind::ConfigInvalid, "kappa must be positive");
  Rational c = (6 - kappa) * (3 * kappa - 8) / (2 * kappa);
  Rational h = (6 - kappa) / (2 * kappa);
  return {c, h};
}

double ito_alpha(double beta, double kappa) { return beta + kappa * beta * (beta - 1) / 4; }

void EnsembleOptions::validate() const {
  if (!(kappa > 0)) fail(ErrorKind::ConfigInvalid, "kappa must be positive");
  if (!(T > 0)) fail(ErrorKind::ConfigInvalid, "T must be positive");
  if (!(dt > 0) || dt > T) fail(ErrorKind::ConfigInvalid, "dt must be in (0, T]");
  if (checkpoints < 1) fail(ErrorKind::ConfigInvalid, "checkpoints must be at least 1");
  if (chunk < 1) fail(ErrorKind::ConfigInvalid, "chunk must be positive");
  if (threads < 1) fail(ErrorKind::ConfigInvalid, "threads must be positive");
  if (!(z_crit > 0)) fail(ErrorKind::ConfigInvalid, "z_crit must be positive");
  if (!(localization >= 0 && localization < 1)) fail(ErrorKind::ConfigInvalid, "localization must be in [0, 1)");
  if (!(effect_size >= 0)) fail(ErrorKind::ConfigInvalid, "effect_size must be nonnegative");
  if (paths < 2) fail(ErrorKind::InsufficientPaths, "at least two paths are needed for a standard error");
}

const char* to_string(Verdict v) { return v == Verdict::Consistent ? "consistent" : "drift_detected"; }

DriftSuite drift_suite(const std::vector<std::pair<std::string, CoeffPolynomial>>& observables,
                       const EnsembleOptions& o) {
  o.validate();
  for (const auto& [name, P] : observables)
    if (!P.is_zero() && P.chart() != Chart::Infinity)
      fail(ErrorKind::ChartMismatch, "drift observables live on the infinity chart: " + name);
  int N = 1;
  for (const auto& [_, P] : observables) N = std::max(N, P.max_slot());
  Grid grid = make_grid(o);
  std::vector<CompiledPolynomial> compiled;
  std::vector<double> initial;
  std::vector<double> zeros(static_cast<std::size_t>(N) + 1, 0.0);
  for (const auto& [_, P] : observables) {
    compiled.emplace_back(P);
    initial.push_back(compiled.back()(zeros));
  }
  std::size_t C = grid.times.size(), K = observables.size();
  // extra: sum b_0^2, sum b_0^4, count of b_1 mismatches
  auto moments = run_ensemble(o, K * C, 3, [&](std::uint64_t path, Moments& m) {
    auto rng = path_rng(o.seed, path);
    std::normal_distribution<double> normal;
    double scale = std::sqrt(o.kappa * grid.h);
    CoeffHierarchy state(N);
    double W = 0;
    std::size_t next_cp = 0;
    for (long step = 1; step <= grid.steps; ++step) {
      W += scale * normal(rng);
      state.step(W, step == grid.steps ? o.T : step * grid.h);
      if (next_cp < C && step == grid.checkpoint_steps[next_cp]) {
        for (std::size_t k = 0; k < K; ++k) {
          double v = compiled[k](state.b());
          double d = v - initial[k];
          m.add(k * C + next_cp, d, std::abs(v));
        }
        ++next_cp;
      }
    }
    double b0 = state.b()[0];
    m.extra[0] += b0 * b0;
    m.extra[1] += b0 * b0 * b0 * b0;
    if (state.b()[1] != 2 * o.T) m.extra[2] += 1;
    m.finish_path();
  });

  DriftSuite suite;
  for (std::size_t k = 0; k < K; ++k) suite.reports.push_back(finish_report(observables[k].first, moments, k * C, grid, o));
  double n = static_cast<double>(moments.count);
  double mean = moments.extra[0] / n;
  double var = (moments.extra[1] / n - mean * mean) * n / (n - 1);
  double se = std::sqrt(std::max(var, 0.0) / n);
  suite.calibration.b1_exact = moments.extra[2] == 0;
  suite.calibration.b0_square_mean = mean;
  suite.calibration.b0_square_z = se > 0 ? (mean - o.kappa * o.T) / se : 0.0;
  suite.calibration.passed = suite.calibration.b1_exact && std::abs(suite.calibration.b0_square_z) <= o.z_crit;
  return suite;
}

DriftReport drift_test(const CoeffPolynomial& P, const EnsembleOptions& options) {
  return drift_suite({{P.to_string(), P}}, options).reports.front();
}

DriftReport observable_drift_test(double alpha, double beta, double x, const EnsembleOptions& o) {
  o.validate();
  if (!(x > 0)) fail(ErrorKind::ConfigInvalid, "boundary point must be to the right of the start, x > 0");
  Grid grid = make_grid(o);
  std::size_t C = grid.times.size();
  double M0 = std::pow(x, beta);
  auto moments = run_ensemble(o, C, 1, [&](std::uint64_t path, Moments& m) {
    std::vector<double> values(C);
    auto fate = simulate_boundary(x, path, o, grid, false, [&](std::size_t i, const BoundaryJet& j) {
      values[i] = std::pow(j.g1, alpha) * std::pow(j.X, beta);
    });
    if (fate == PathFate::Swallowed) {
      ++m.swallowed;
      return;
    }
    if (fate == PathFate::Localized) m.extra[0] += 1;
    for (std::size_t i = 0; i < C; ++i) m.add(i, values[i] - M0, std::abs(values[i]));
    m.finish_path();
  });
  double total = static_cast<double>(moments.count + moments.swallowed);
  if (moments.swallowed / total > o.max_swallowed_fraction)
    fail(ErrorKind::PathSwallowed, "too many paths swallowed the boundary point");
  if (moments.count < 2) fail(ErrorKind::InsufficientPaths, "fewer than two surviving paths");
  char name[96];
  std::snprintf(name, sizeof name, "g'(x)^%.6g (g(x)-W)^%.6g at x=%.6g", alpha, beta, x);
  auto report = finish_report(name, moments, 0, grid, o);
  report.localized_fraction = moments.extra[0] / total;
  return report;
}

KernelSuiteReport kernel_martingale_suite(const Rational& kappa, int max_weight, const EnsembleOptions& options,
                                          const Rational& perturbation) {
  if (max_weight < 1) fail(ErrorKind::ConfigInvalid, "weight must be at least 1");
  int N = std::max(1, max_weight - 1);
  auto basis = kernel_solve(sle_generator(kappa, N), max_weight);
  std::vector<std::pair<std::string, CoeffPolynomial>> observables;
  for (const auto& P : basis) observables.emplace_back(P.to_string(), P);
  auto b0 = CoeffPolynomial::coordinate(Chart::Infinity, 0), b1 = CoeffPolynomial::coordinate(Chart::Infinity, 1);
  auto perturbed = b1 - (2 / kappa + perturbation) * b0 * b0;
  observables.emplace_back(perturbed.to_string(), perturbed);
  EnsembleOptions o = options;
  o.kappa = kappa.get_d();
  auto suite = drift_suite(observables, o);
  KernelSuiteReport r;
  r.calibration = suite.calibration;
  r.perturbed = suite.reports.back();
  suite.reports.pop_back();
  r.kernel = std::move(suite.reports);
  r.all_consistent = true;
  for (const auto& k : r.kernel) r.all_consistent = r.all_consistent && k.verdict == Verdict::Consistent;
  r.perturbed_detected = r.perturbed.verdict == Verdict::DriftDetected;
  return r;
}

RnDensityReport rn_density_report(double x_A, const EnsembleOptions& o) {
  o.validate();
  if (!(x_A > 0)) fail(ErrorKind::ConfigInvalid, "boundary point must satisfy x > 0");
  RnDensityReport r;
  r.ch = ch_from_kappa(o.kappa);
  r.beta = 2 / o.kappa;
  Grid grid = make_grid(o);
  std::size_t C = grid.times.size();
  r.times = grid.times;
  // slots: boundary factor; extra: log factor and Schwarzian sums per checkpoint
  auto moments = run_ensemble(o, C, 2 * C, [&](std::uint64_t path, Moments& m) {
    std::vector<double> factor(C), logf(C), schw(C);
    auto fate = simulate_boundary(x_A, path, o, grid, true, [&](std::size_t i, const BoundaryJet& j) {
      logf[i] = r.ch.h == 0 ? 0.0 : r.ch.h * std::log(j.g1);
      factor[i] = std::exp(logf[i]);
      double q = j.g2 / j.g1;
      schw[i] = r.ch.c / 6 * (j.g3 / j.g1 - 1.5 * q * q);
    });
    if (fate == PathFate::Swallowed) {
      ++m.swallowed;
      return;
    }
    for (std::size_t i = 0; i < C; ++i) {
      m.add(i, factor[i], std::abs(factor[i]));
      m.extra[i] += logf[i];
      m.peak[i] = std::max(m.peak[i], std::abs(logf[i]));
      m.extra[C + i] += schw[i];
    }
    m.finish_path();
  });
  double total = static_cast<double>(moments.count + moments.swallowed);
  if (moments.swallowed / total > o.max_swallowed_fraction)
    fail(ErrorKind::PathSwallowed, "too many paths swallowed the boundary point");
  double n = static_cast<double>(moments.count);
  r.log_identically_zero = true;
  for (std::size_t i = 0; i < C; ++i) {
    r.boundary_factor_mean.push_back(moments.mean[i]);
    r.log_factor_mean.push_back(moments.extra[i] / n);
    r.log_factor_max_abs.push_back(moments.peak[i]);
    r.schwarzian_mean.push_back(moments.extra[C + i] / n);
    r.log_identically_zero = r.log_identically_zero && moments.peak[i] == 0;
  }
  r.cross_check = observable_drift_test(r.ch.h, r.beta, x_A, o);
  return r;
}

} // namespace loewner
