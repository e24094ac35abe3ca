#include "loewner/circle.hpp"

#include <cmath>
#include <numbers>

#include <fftw3.h>

namespace loewner {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Complex coefficients C_{-M..M} stored at index k + M.
std::vector<Complex> to_complex_coeffs(const FourierField& v) {
  int M = v.modes();
  std::vector<Complex> c(2 * M + 1);
  c[M] = v.a[0];
  for (int k = 1; k <= M; ++k) {
    c[M + k] = Complex(v.a[k], -v.b[k]) / 2.0;
    c[M - k] = Complex(v.a[k], v.b[k]) / 2.0;
  }
  return c;
}

FourierField from_complex_coeffs(const std::vector<Complex>& c) {
  int M = static_cast<int>(c.size() / 2);
  FourierField v(M);
  v.a[0] = c[M].real();
  for (int k = 1; k <= M; ++k) {
    v.a[k] = (c[M + k] + c[M - k]).real();
    v.b[k] = (Complex(0, 1) * (c[M + k] - c[M - k])).real();
  }
  return v;
}

FourierField padded(const FourierField& x, int modes) {
  FourierField r(modes);
  for (int k = 0; k <= x.modes() && k <= modes; ++k) {
    r.a[k] = x.a[k];
    r.b[k] = k == 0 ? 0.0 : x.b[k];
  }
  return r;
}

} // namespace

FourierField::FourierField(std::vector<double> cosine, std::vector<double> sine) : a(std::move(cosine)), b(std::move(sine)) {
  if (a.empty()) a.assign(1, 0.0);
  std::size_t n = std::max(a.size(), b.size());
  a.resize(n, 0.0);
  b.resize(n, 0.0);
  b[0] = 0.0;
}

FourierField FourierField::cosine(int k, double amplitude) {
  FourierField v(k);
  v.a[k] = amplitude;
  return v;
}

FourierField FourierField::sine(int k, double amplitude) {
  FourierField v(k);
  if (k > 0) v.b[k] = amplitude;
  return v;
}

double FourierField::operator()(double t) const {
  double s = a[0];
  for (int k = 1; k <= modes(); ++k) s += a[k] * std::cos(k * t) + b[k] * std::sin(k * t);
  return s;
}

double FourierField::derivative_at(double t) const {
  double s = 0;
  for (int k = 1; k <= modes(); ++k) s += k * (b[k] * std::cos(k * t) - a[k] * std::sin(k * t));
  return s;
}

double FourierField::max_abs_diff(const FourierField& other) const {
  int M = std::max(modes(), other.modes());
  auto x = padded(*this, M), y = padded(other, M);
  double m = 0;
  for (int k = 0; k <= M; ++k) m = std::max({m, std::abs(x.a[k] - y.a[k]), std::abs(x.b[k] - y.b[k])});
  return m;
}

FourierField operator+(const FourierField& x, const FourierField& y) {
  int M = std::max(x.modes(), y.modes());
  auto r = padded(x, M);
  auto yy = padded(y, M);
  for (int k = 0; k <= M; ++k) {
    r.a[k] += yy.a[k];
    r.b[k] += yy.b[k];
  }
  return r;
}

FourierField operator*(double s, const FourierField& x) {
  auto r = x;
  for (auto& v : r.a) v *= s;
  for (auto& v : r.b) v *= s;
  return r;
}

FourierField operator-(const FourierField& x, const FourierField& y) { return x + (-1.0) * y; }

FourierField hilbert_transform(const FourierField& f) {
  FourierField r(f.modes());
  for (int k = 1; k <= f.modes(); ++k) {
    r.a[k] = f.b[k];
    r.b[k] = -f.a[k];
  }
  return r;
}

FourierField complex_structure_J(const FourierField& v) {
  if (v.a[0] != 0.0) fail(ErrorKind::NonzeroMean, "almost-complex structure needs a zero-mean field");
  return hilbert_transform(v);
}

FourierField bracket(const FourierField& v1, const FourierField& v2) {
  int M1 = v1.modes(), M2 = v2.modes(), M = M1 + M2;
  auto c1 = to_complex_coeffs(v1), c2 = to_complex_coeffs(v2);
  std::vector<Complex> out(2 * M + 1);
  for (int j = -M1; j <= M1; ++j)
    for (int l = -M2; l <= M2; ++l)
      out[M + j + l] += c1[M1 + j] * c2[M2 + l] * Complex(0, l - j);
  return from_complex_coeffs(out);
}

double omega_ch(const FourierField& v1, const FourierField& v2, const CentralParams& p) {
  int M = std::min(v1.modes(), v2.modes());
  auto c1 = to_complex_coeffs(v1), c2 = to_complex_coeffs(v2);
  int M1 = v1.modes(), M2 = v2.modes();
  Complex acc{};
  for (int k = -M; k <= M; ++k) {
    double kk = k;
    Complex mult = Complex(0, 1) * (kk * (2 * p.h - p.c / 12.0) + (p.c / 12.0) * kk * kk * kk);
    acc += mult * c1[M1 + k] * c2[M2 - k];
  }
  return acc.real();
}

double kahler_form(const FourierField& u, const FourierField& v, const CentralParams& p) {
  return omega_ch(u, complex_structure_J(v), p);
}

double kahler_metric_coeff(int k, const CentralParams& p) {
  if (k < 1) fail(ErrorKind::ConfigInvalid, "metric coefficient index must be >= 1");
  double kk = k;
  return 2 * p.h * kk + (p.c / 12.0) * (kk * kk * kk - kk);
}

double polyakov_alvarez(const FourierField& phi) {
  double s = 0;
  for (int k = 1; k <= phi.modes(); ++k) s += k * (phi.a[k] * phi.a[k] + phi.b[k] * phi.b[k]);
  return -s / 12.0 - phi.a[0] / 3.0;
}

BoundaryTrace boundary_log_derivative(const TruncatedTaylor<Complex>& f, int grid, int max_grid) {
  if (f.order() < 1) fail(ErrorKind::InsufficientOrder, "boundary trace needs f to order >= 1");
  auto df = derivative(f);
  bool fixed = grid > 0;
  int G = 16;
  if (fixed) {
    G = grid;
  } else {
    while (G < 4 * f.order()) G *= 2;
  }
  for (;;) {
    std::vector<double> samples(G);
    for (int n = 0; n < G; ++n) {
      double t = kTwoPi * n / G;
      double m = std::abs(evaluate(df, std::polar(1.0, t)));
      if (!(m > 0) || !std::isfinite(m))
        fail(ErrorKind::InsufficientResolution, "f' vanishes or diverges on the unit circle");
      samples[n] = std::log(m);
    }
    int H = G / 2 + 1;
    std::vector<fftw_complex> spectrum(H);
    fftw_plan plan = fftw_plan_dft_r2c_1d(G, samples.data(), spectrum.data(), FFTW_ESTIMATE);
    fftw_execute(plan);
    fftw_destroy_plan(plan);

    double total = 0, tail = 0;
    for (int k = 0; k < H; ++k) {
      double e = spectrum[k][0] * spectrum[k][0] + spectrum[k][1] * spectrum[k][1];
      double weight = (k == 0 || 2 * k == G) ? 1.0 : 2.0;
      total += weight * e;
      if (4 * k >= G) tail += weight * e;
    }
    double fraction = total > 0 ? tail / total : 0.0;
    if (fraction <= 1e-8) {
      int M = (G - 1) / 2;
      FourierField phi(M);
      phi.a[0] = spectrum[0][0] / G;
      for (int k = 1; k <= M; ++k) {
        phi.a[k] = 2.0 * spectrum[k][0] / G;
        phi.b[k] = -2.0 * spectrum[k][1] / G;
      }
      return BoundaryTrace{phi, G, fraction};
    }
    if (fixed || 2 * G > max_grid)
      fail(ErrorKind::InsufficientResolution,
           "energy above the quarter-grid band is " + std::to_string(fraction) + " at grid " + std::to_string(G));
    G *= 2;
  }
}

PolyakovAlvarezResult polyakov_alvarez(const TruncatedTaylor<Complex>& f, int grid) {
  auto trace = boundary_log_derivative(f, grid);
  return PolyakovAlvarezResult{polyakov_alvarez(trace.phi), trace.grid};
}

} // namespace loewner
