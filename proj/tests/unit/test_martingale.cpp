#include "doctest.h"
#include "support.hpp"

#include <cmath>

#include "loewner/martingale.hpp"
#include "loewner/sle.hpp"
#include "loewner/virasoro.hpp"

using namespace loewner;
using namespace testing_support;

namespace {

CoeffPolynomial b(int index) { return CoeffPolynomial::coordinate(Chart::Infinity, index); }

EnsembleOptions small(double kappa, double T, long paths) {
  EnsembleOptions o;
  o.kappa = kappa;
  o.T = T;
  o.paths = paths;
  o.checkpoints = 5;
  o.chunk = 1000;
  return o;
}

template <class F>
ErrorKind kind_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::ConfigInvalid;
}

// g_T and its first three x-derivatives along one Brownian path, from
// five-point finite differences of chordal_map.
struct FiniteJet {
  double X, g1, g2, g3;
};

FiniteJet finite_jet(double x, double kappa, std::uint64_t seed, std::uint64_t path, double dt, double T) {
  const double eps = 2e-3;
  auto drive = Driving::brownian(kappa, seed, dt, path);
  double g[5];
  for (int k = -2; k <= 2; ++k) {
    auto r = chordal_map(Complex(x + k * eps, 0.0), drive, T);
    REQUIRE_FALSE(r.swallow_time.has_value());
    g[k + 2] = r.g.real();
  }
  int n = static_cast<int>(std::ceil(T / dt - 1e-9));
  double W = sample_driving(drive, T, n).back();
  return {g[2] - W, (g[0] - 8 * g[1] + 8 * g[3] - g[4]) / (12 * eps),
          (-g[0] + 16 * g[1] - 30 * g[2] + 16 * g[3] - g[4]) / (12 * eps * eps),
          (-g[0] + 2 * g[1] - 2 * g[3] + g[4]) / (2 * eps * eps * eps)};
}

} // namespace

TEST_CASE("central charge and weight from kappa") {
  struct Row {
    Rational kappa, c, h;
  };
  for (const auto& row : {Row{6, 0, 0}, Row{Rational(8, 3), 0, Rational(5, 8)}, Row{2, -2, 1}}) {
    auto [c, h] = ch_from_kappa_exact(row.kappa);
    CHECK(c == row.c);
    CHECK(h == row.h);
    auto p = ch_from_kappa(row.kappa.get_d());
    CHECK(p.c == doctest::Approx(row.c.get_d()).epsilon(1e-15));
    CHECK(p.h == doctest::Approx(row.h.get_d()).epsilon(1e-15));
  }
  std::mt19937_64 rng(301);
  for (int trial = 0; trial < 50; ++trial) {
    Rational kappa = abs(random_rational(rng, 20, 7)) + Rational(1, 11);
    CHECK(ch_from_kappa_exact(kappa).first == ch_from_kappa_exact(16 / kappa).first);
  }
  CHECK(kind_of([] { ch_from_kappa(0); }) == ErrorKind::ConfigInvalid);
  CHECK(kind_of([] { ch_from_kappa_exact(Rational(-1)); }) == ErrorKind::ConfigInvalid);
}

TEST_CASE("Ito exponent relation") {
  // Drift of g'^a X^b divided by g'^a X^(b-2): -2a + 2b + kappa b (b - 1) / 2.
  for (double kappa : {0.5, 2.0, 8.0 / 3, 4.0, 6.0, 8.0})
    for (double beta : {-1.5, -0.5, 0.0, 0.75, 1.0, 2.0, 3.5}) {
      double alpha = ito_alpha(beta, kappa);
      CHECK(std::abs(-2 * alpha + 2 * beta + kappa * beta * (beta - 1) / 2) < 1e-12);
    }
  for (double kappa : {2.0, 4.0, 6.0}) {
    auto [low, high] = one_point_kernel_exponents(kappa);
    CHECK(ito_alpha(low, kappa) == 0);
    CHECK(std::abs(ito_alpha(high, kappa)) < 1e-15);
  }
}

TEST_CASE("ensemble options are validated") {
  auto o = small(2, 1, 100);
  o.paths = 1;
  CHECK(kind_of([&] { drift_test(b(0), o); }) == ErrorKind::InsufficientPaths);
  o = small(2, 1, 100);
  o.dt = 0;
  CHECK(kind_of([&] { drift_test(b(0), o); }) == ErrorKind::ConfigInvalid);
  o = small(2, 1, 100);
  o.localization = 1;
  CHECK(kind_of([&] { observable_drift_test(0, 0, 1, o); }) == ErrorKind::ConfigInvalid);
  o = small(-1, 1, 100);
  CHECK(kind_of([&] { drift_test(b(0), o); }) == ErrorKind::ConfigInvalid);
  CHECK(kind_of([&] { observable_drift_test(0, 0, -1, small(2, 1, 100)); }) == ErrorKind::ConfigInvalid);
  CHECK(kind_of([&] { drift_test(CoeffPolynomial::coordinate(Chart::Disc, 2), small(2, 1, 100)); }) ==
        ErrorKind::ChartMismatch);
}

TEST_CASE("drift suite reproduces exact polynomial values on coefficient paths") {
  auto o = small(3, 0.4, 3);
  o.checkpoints = 1;
  o.seed = 17;
  std::vector<std::pair<std::string, CoeffPolynomial>> obs;
  obs.emplace_back("a", b(2) + Rational(1, 4) * b(0) * b(0) * b(0));
  obs.emplace_back("b", b(0) * b(3) - Rational(2) * b(1) * b(1) + CoeffPolynomial::constant(Chart::Infinity, 5));
  auto suite = drift_suite(obs, o);
  for (std::size_t k = 0; k < obs.size(); ++k) {
    double sum = 0;
    for (std::uint64_t p = 0; p < 3; ++p) {
      auto path = coeff_hierarchy(Driving::brownian(o.kappa, o.seed, o.dt, p), 3, o.T);
      std::vector<Complex> slots(path.b.back().begin(), path.b.back().end());
      sum += obs[k].second.evaluate(slots).real() - obs[k].second.evaluate(std::vector<Complex>(4, 0.0)).real();
    }
    CHECK(suite.reports[k].mean.back() == doctest::Approx(sum / 3).epsilon(1e-12));
  }
}

TEST_CASE("drift verdicts for the lowest coordinates") {
  auto o = small(2, 1, 20000);
  auto suite = drift_suite({{"b0", b(0)}, {"b1", b(1)}, {"b0^2", b(0) * b(0)}, {"k", b(1) - b(0) * b(0)}}, o);
  CHECK(suite.calibration.b1_exact);
  CHECK(suite.calibration.passed);
  CHECK(std::abs(suite.calibration.b0_square_z) <= o.z_crit);
  const auto& b0 = suite.reports[0];
  const auto& b1 = suite.reports[1];
  const auto& sq = suite.reports[2];
  CHECK(b0.verdict == Verdict::Consistent);
  CHECK(b1.verdict == Verdict::DriftDetected);
  CHECK(suite.reports[3].verdict == Verdict::Consistent);
  REQUIRE(b1.times.size() == 5);
  CHECK(b1.times.back() == 1.0);
  for (std::size_t i = 0; i < b1.times.size(); ++i) {
    CHECK(b1.mean[i] == doctest::Approx(2 * b1.times[i]).epsilon(1e-12));
    CHECK(b1.se[i] == 0);
    CHECK(std::isinf(b1.z[i]));
    // E[b0^2] = kappa t from Brownian scaling.
    CHECK(std::abs(sq.mean[i] - o.kappa * sq.times[i]) < 4 * sq.se[i]);
  }
  CHECK(sq.verdict == Verdict::DriftDetected);
  for (const auto& r : suite.reports) {
    double z = 0;
    for (double v : r.z) z = std::max(z, std::abs(v));
    CHECK(r.max_abs_z == z);
    CHECK((r.verdict == Verdict::DriftDetected) == (r.max_abs_z > o.z_crit));
    CHECK_FALSE(r.high_variance);
  }
}

TEST_CASE("effect size gate") {
  auto o = small(2, 1, 100);
  o.effect_size = 0.5;
  CHECK(kind_of([&] { drift_test(b(0), o); }) == ErrorKind::InsufficientPaths);
  o.paths = 4000;
  CHECK_NOTHROW(drift_test(b(0), o));
}

TEST_CASE("kernel suite at weight two and three") {
  auto o = small(4, 1, 20000);
  auto w2 = kernel_martingale_suite(Rational(4), 2, o);
  REQUIRE(w2.kernel.size() == 3);
  CHECK(w2.kernel[2].observable == (b(1) - Rational(1, 2) * b(0) * b(0)).to_string());
  CHECK(w2.all_consistent);
  CHECK(w2.perturbed_detected);
  CHECK(w2.calibration.passed);
  // b1 - (2/kappa + 1/2) b0^2 has mean -kappa t / 2.
  for (std::size_t i = 0; i < w2.perturbed.times.size(); ++i)
    CHECK(std::abs(w2.perturbed.mean[i] + 2 * w2.perturbed.times[i]) < 4 * w2.perturbed.se[i]);
  CHECK(w2.perturbed.max_abs_z > 5);

  auto w3 = kernel_martingale_suite(Rational(8, 3), 3, small(8.0 / 3, 1, 20000));
  CHECK(w3.kernel.size() == 5);
  CHECK(w3.all_consistent);
  CHECK(w3.perturbed_detected);
}

TEST_CASE("ensembles are reproducible and thread invariant") {
  auto o = small(2, 0.5, 5000);
  auto a = drift_test(b(2), o);
  auto again = drift_test(b(2), o);
  o.threads = 3;
  auto threaded = drift_test(b(2), o);
  CHECK(a.mean == again.mean);
  CHECK(a.mean == threaded.mean);
  CHECK(a.se == threaded.se);
  o.seed = 2;
  CHECK(drift_test(b(2), o).mean != a.mean);

  auto m1 = observable_drift_test(3, 2, 1, small(2, 0.2, 3000));
  auto mo = small(2, 0.2, 3000);
  mo.threads = 4;
  auto m2 = observable_drift_test(3, 2, 1, mo);
  CHECK(m1.mean == m2.mean);
  CHECK(m1.localized_fraction == m2.localized_fraction);
}

TEST_CASE("boundary observable matches finite differences of the chordal map") {
  auto o = small(2, 0.2, 2);
  o.checkpoints = 1;
  o.localization = 0;
  o.seed = 5;
  const double x = 1.0, alpha = 1.3, beta = 0.7;
  double sum = 0;
  for (std::uint64_t p = 0; p < 2; ++p) {
    auto jet = finite_jet(x, o.kappa, o.seed, p, o.dt, o.T);
    sum += std::pow(jet.g1, alpha) * std::pow(jet.X, beta);
  }
  auto r = observable_drift_test(alpha, beta, x, o);
  CHECK(r.mean.back() + std::pow(x, beta) == doctest::Approx(sum / 2).epsilon(1e-8));
}

TEST_CASE("observable family verdicts") {
  auto trivial = observable_drift_test(0, 0, 1, small(2, 0.2, 500));
  for (double m : trivial.mean) CHECK(m == 0);
  CHECK(trivial.max_abs_z == 0);
  CHECK(trivial.verdict == Verdict::Consistent);

  struct Case {
    double beta, kappa;
  };
  for (auto c : {Case{1 - 4 / 2.0, 2}, Case{2, 2}, Case{2, 8.0 / 3}}) {
    CAPTURE(c.beta);
    CAPTURE(c.kappa);
    auto o = small(c.kappa, 0.2, 30000);
    double alpha = ito_alpha(c.beta, c.kappa);
    auto fair = observable_drift_test(alpha, c.beta, 1, o);
    auto off = observable_drift_test(alpha + 0.2, c.beta, 1, o);
    CHECK(fair.verdict == Verdict::Consistent);
    CHECK(off.verdict == Verdict::DriftDetected);
    CHECK(fair.swallowed_fraction <= o.max_swallowed_fraction);
    CHECK_FALSE(fair.high_variance);
  }
}

TEST_CASE("swallowed boundary points invalidate a run") {
  auto o = small(8, 1, 2000);
  o.localization = 0;
  CHECK(kind_of([&] { observable_drift_test(0, 1, 0.1, o); }) == ErrorKind::PathSwallowed);
}

TEST_CASE("density report factors") {
  auto six = rn_density_report(1, small(6, 0.2, 2000));
  CHECK(six.ch.h == 0);
  CHECK(six.log_identically_zero);
  for (double v : six.boundary_factor_mean) CHECK(v == 1);
  for (double v : six.log_factor_max_abs) CHECK(v == 0);
  for (double v : six.schwarzian_mean) CHECK(v == 0);

  auto o = small(8.0 / 3, 0.2, 20000);
  auto r = rn_density_report(1, o);
  CHECK(r.ch.c == 0);
  CHECK(r.ch.h == doctest::Approx(0.625));
  CHECK(r.beta == doctest::Approx(0.75));
  CHECK(ito_alpha(r.beta, o.kappa) == doctest::Approx(r.ch.h));
  CHECK_FALSE(r.log_identically_zero);
  for (double v : r.schwarzian_mean) CHECK(v == 0);
  for (std::size_t i = 0; i < r.times.size(); ++i) {
    CHECK(r.boundary_factor_mean[i] < 1);
    CHECK(r.boundary_factor_mean[i] >= std::exp(r.log_factor_mean[i]));
  }
  CHECK(r.cross_check.verdict == Verdict::Consistent);
}

TEST_CASE("density report Schwarzian against finite differences") {
  auto o = small(2, 0.2, 2);
  o.checkpoints = 1;
  o.localization = 0;
  o.seed = 9;
  auto r = rn_density_report(1, o);
  double c = ch_from_kappa(2).c, h = ch_from_kappa(2).h, schwarzian = 0, factor = 0;
  for (std::uint64_t p = 0; p < 2; ++p) {
    auto jet = finite_jet(1, 2, o.seed, p, o.dt, o.T);
    schwarzian += c / 6 * (jet.g3 / jet.g1 - 1.5 * (jet.g2 / jet.g1) * (jet.g2 / jet.g1)) / 2;
    factor += std::pow(jet.g1, h) / 2;
  }
  CHECK(r.boundary_factor_mean.back() == doctest::Approx(factor).epsilon(1e-8));
  CHECK(r.schwarzian_mean.back() == doctest::Approx(schwarzian).epsilon(1e-4));
}
