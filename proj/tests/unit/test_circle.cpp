#include "doctest.h"
#include "support.hpp"

#include <cmath>
#include <numbers>

#include "loewner/circle.hpp"

using namespace loewner;
using namespace testing_support;

namespace {

constexpr double kPi = std::numbers::pi;

FourierField random_field(std::mt19937_64& rng, int M, bool zero_mean) {
  std::uniform_real_distribution<double> u(-1, 1);
  FourierField v(M);
  v.a[0] = zero_mean ? 0.0 : u(rng);
  for (int k = 1; k <= M; ++k) {
    v.a[k] = u(rng);
    v.b[k] = u(rng);
  }
  return v;
}

double third_derivative(const FourierField& v, double t) {
  double s = 0;
  for (int k = 1; k <= v.modes(); ++k) {
    double k3 = double(k) * k * k;
    s += k3 * (v.a[k] * std::sin(k * t) - v.b[k] * std::cos(k * t));
  }
  return s;
}

// Trapezoid rule on a grid finer than any product of modes: exact for trig polynomials.
double omega_quadrature(const FourierField& v1, const FourierField& v2, const CentralParams& p) {
  int G = 8 * (v1.modes() + v2.modes() + 4);
  double acc = 0;
  for (int n = 0; n < G; ++n) {
    double t = 2 * kPi * n / G;
    double lhs = (2 * p.h - p.c / 12) * v1.derivative_at(t) - (p.c / 12) * third_derivative(v1, t);
    acc += lhs * v2(t);
  }
  return acc / G;
}

} // namespace

TEST_CASE("Hilbert transform on the trigonometric basis") {
  auto c = hilbert_transform(FourierField::cosine(0, 3.0));
  CHECK(c.max_abs_diff(FourierField()) == 0.0);
  CHECK(hilbert_transform(FourierField::cosine(1)).max_abs_diff(FourierField::sine(1, -1.0)) == 0.0);
  CHECK(hilbert_transform(FourierField::sine(1)).max_abs_diff(FourierField::cosine(1)) == 0.0);
  std::mt19937_64 rng(31);
  for (int M : {1, 8, 64}) {
    auto v = random_field(rng, M, true);
    CHECK(hilbert_transform(hilbert_transform(v)).max_abs_diff((-1.0) * v) < 1e-12);
    CHECK(complex_structure_J(complex_structure_J(v)).max_abs_diff((-1.0) * v) < 1e-12);
  }
}

TEST_CASE("almost-complex structure") {
  CHECK(complex_structure_J(FourierField::cosine(1)).max_abs_diff(FourierField::sine(1, -1.0)) == 0.0);
  CHECK(complex_structure_J(FourierField::sine(3)).max_abs_diff(FourierField::cosine(3)) == 0.0);
  try {
    complex_structure_J(FourierField::cosine(0));
    FAIL("nonzero mean must be rejected");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NonzeroMean);
  }
}

TEST_CASE("bracket of vector fields") {
  std::mt19937_64 rng(32);
  auto v = random_field(rng, 6, false);
  CHECK(bracket(v, v).max_abs_diff(FourierField()) < 1e-14);
  auto cs = bracket(FourierField::cosine(1), FourierField::sine(1));
  CHECK(cs.max_abs_diff(FourierField::cosine(0)) < 1e-15);
  // pointwise product-rule oracle
  auto w = random_field(rng, 5, false);
  auto br = bracket(v, w);
  for (double t : {0.1, 1.3, 2.9, 4.4}) {
    double want = v(t) * w.derivative_at(t) - v.derivative_at(t) * w(t);
    CHECK(br(t) == doctest::Approx(want).epsilon(1e-12));
  }
}

TEST_CASE("property: Jacobi identity") {
  std::mt19937_64 rng(33);
  for (int trial = 0; trial < 10; ++trial) {
    auto x = random_field(rng, 4, false), y = random_field(rng, 3, false), z = random_field(rng, 5, false);
    auto sum = bracket(x, bracket(y, z)) + bracket(y, bracket(z, x)) + bracket(z, bracket(x, y));
    CHECK(sum.max_abs_diff(FourierField()) < 1e-12);
  }
}

TEST_CASE("Virasoro cocycle values") {
  CentralParams p{1.7, 0.35};
  std::mt19937_64 rng(34);
  auto v = random_field(rng, 7, false);
  CHECK(std::abs(omega_ch(v, v, p)) < 1e-14);
  for (int m = 1; m <= 6; ++m) {
    double want = -p.h * m - (p.c / 24.0) * (double(m) * m * m - m);
    CHECK(omega_ch(FourierField::cosine(m), FourierField::sine(m), p) == doctest::Approx(want).epsilon(1e-14));
    CHECK(omega_quadrature(FourierField::cosine(m), FourierField::sine(m), p) == doctest::Approx(want).epsilon(1e-12));
  }
  CHECK(omega_ch(FourierField::cosine(1), FourierField::sine(1), CentralParams{12, 0}) == 0.0);
  for (int trial = 0; trial < 10; ++trial) {
    auto x = random_field(rng, 6, false), y = random_field(rng, 9, false);
    CHECK(omega_ch(x, y, p) == doctest::Approx(omega_quadrature(x, y, p)).epsilon(1e-11));
    CHECK(omega_ch(x, y, p) == doctest::Approx(-omega_ch(y, x, p)).epsilon(1e-12));
  }
}

TEST_CASE("property: cocycle identity and bilinearity") {
  CentralParams p{-2.0, 1.0};
  std::mt19937_64 rng(35);
  for (int trial = 0; trial < 10; ++trial) {
    auto x = random_field(rng, 4, false), y = random_field(rng, 4, false), z = random_field(rng, 4, false);
    double cyc = omega_ch(bracket(x, y), z, p) + omega_ch(bracket(y, z), x, p) + omega_ch(bracket(z, x), y, p);
    CHECK(std::abs(cyc) < 1e-10);
    double lin = omega_ch(2.5 * x + y, z, p) - 2.5 * omega_ch(x, z, p) - omega_ch(y, z, p);
    CHECK(std::abs(lin) < 1e-12);
  }
}

TEST_CASE("Kahler metric coefficients") {
  CHECK(kahler_metric_coeff(1, {3.0, 0.7}) == doctest::Approx(1.4));
  CHECK(kahler_metric_coeff(2, {12.0, 0.0}) == doctest::Approx(6.0));
  for (int k = 1; k <= 5; ++k) CHECK(kahler_metric_coeff(k, {0.0, 0.5}) == doctest::Approx(k));
  CentralParams p{0.9, -0.4};
  for (int k = 1; k <= 8; ++k) {
    double w = kahler_form(FourierField::cosine(k), FourierField::cosine(k), p) +
               kahler_form(FourierField::sine(k), FourierField::sine(k), p);
    CHECK(w == doctest::Approx(kahler_metric_coeff(k, p)).epsilon(1e-13));
  }
}

namespace {

// -(1/6pi)(1/2 int phi d_n phi dt + int phi dt), with d_n phi = Re(z f''(z)/f'(z)).
double pa_quadrature(const TruncatedTaylor<Complex>& f, int G) {
  auto d1 = derivative(f);
  auto d2 = derivative(d1);
  double s1 = 0, s2 = 0;
  for (int n = 0; n < G; ++n) {
    Complex z = std::polar(1.0, 2 * kPi * n / G);
    Complex fp = evaluate(d1, z);
    double phi = std::log(std::abs(fp));
    double dn = (z * evaluate(d2, z) / fp).real();
    s1 += phi * dn;
    s2 += phi;
  }
  double h = 2 * kPi / G;
  return -(0.5 * s1 * h + s2 * h) / (6 * kPi);
}

} // namespace

TEST_CASE("Polyakov-Alvarez exponent") {
  auto id = TruncatedTaylor<Complex>::identity(4);
  CHECK(polyakov_alvarez(id).exponent == 0.0);
  for (double r : {0.5, 2.0, 3.3}) {
    auto f = TruncatedTaylor<Complex>::zero(3);
    f[1] = r;
    auto res = polyakov_alvarez(f);
    CHECK(res.exponent == doctest::Approx(-std::log(r) / 3).epsilon(1e-14));
    CHECK(res.grid >= 16);
  }
  // additivity under composition of dilations
  auto f1 = TruncatedTaylor<Complex>::zero(2), f2 = TruncatedTaylor<Complex>::zero(2), f12 = TruncatedTaylor<Complex>::zero(2);
  f1[1] = 0.7;
  f2[1] = 1.9;
  f12 = compose(f1, f2);
  CHECK(polyakov_alvarez(f12).exponent ==
        doctest::Approx(polyakov_alvarez(f1).exponent + polyakov_alvarez(f2).exponent).epsilon(1e-14));

  auto f = TruncatedTaylor<Complex>::identity(2);
  f[2] = 0.05;
  auto res = polyakov_alvarez(f);
  CHECK(std::abs(res.exponent - pa_quadrature(f, 1 << 14)) < 1e-8);
  CHECK((res.grid & (res.grid - 1)) == 0);

  std::mt19937_64 rng(36);
  auto g = random_normalized_complex(rng, 6, 0.05);
  CHECK(std::abs(polyakov_alvarez(g).exponent - pa_quadrature(g, 1 << 14)) < 1e-8);
}

TEST_CASE("boundary sampling resolution") {
  auto f = TruncatedTaylor<Complex>::identity(2);
  f[2] = 0.45;  // close to a critical point on the circle: slow decay of log|f'|
  try {
    boundary_log_derivative(f, 16);
    FAIL("a 16-point grid cannot resolve this trace");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InsufficientResolution);
  }
  auto trace = boundary_log_derivative(f);
  CHECK(trace.tail_energy_fraction <= 1e-8);
  CHECK(trace.grid > 16);
}
