#pragma once

// Truncated Taylor series at the origin and Laurent series at infinity.
//
// A TruncatedTaylor of order N stores a_0..a_N and represents the class of
// a_0 + a_1 z + ... + a_N z^N modulo z^{N+1}. Results of binary operations
// carry the smaller order of their operands; derivatives lose one order.
// Nothing is ever zero-padded implicitly; `padded()` is the explicit escape
// hatch for inputs that are known to be polynomials.

#include <algorithm>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "loewner/error.hpp"
#include "loewner/scalar.hpp"

namespace loewner {

template <class T>
class TruncatedTaylor {
public:
  TruncatedTaylor() : c_(1, T(0)) {}
  explicit TruncatedTaylor(std::vector<T> coeffs) : c_(std::move(coeffs)) {
    if (c_.empty()) c_.assign(1, T(0));
  }

  static TruncatedTaylor zero(int order) { return TruncatedTaylor(std::vector<T>(order + 1, T(0))); }
  static TruncatedTaylor constant(const T& value, int order) {
    auto s = zero(order);
    s.c_[0] = value;
    return s;
  }
  static TruncatedTaylor monomial(int power, const T& value, int order) {
    auto s = zero(order);
    if (power <= order) s.c_[power] = value;
    return s;
  }
  static TruncatedTaylor identity(int order) { return monomial(1, from_int<T>(1), order); }

  int order() const { return static_cast<int>(c_.size()) - 1; }
  const T& operator[](int k) const { return c_.at(static_cast<std::size_t>(k)); }
  T& operator[](int k) { return c_.at(static_cast<std::size_t>(k)); }
  std::span<const T> coeffs() const { return c_; }

  TruncatedTaylor truncated(int order) const {
    if (order > this->order())
      fail(ErrorKind::InsufficientOrder, "cannot truncate to a higher order than known");
    return TruncatedTaylor(std::vector<T>(c_.begin(), c_.begin() + order + 1));
  }
  // Caller asserts the represented function is the polynomial itself.
  TruncatedTaylor padded(int order) const {
    auto v = c_;
    if (order + 1 > static_cast<int>(v.size())) v.resize(order + 1, T(0));
    return TruncatedTaylor(std::move(v));
  }

  bool in_aut() const { return order() >= 1 && is_zero(c_[0]) && !is_zero(c_[1]); }
  bool in_aut_plus() const { return in_aut() && ScalarTraits<T>::is_one(c_[1]); }

  friend bool operator==(const TruncatedTaylor& a, const TruncatedTaylor& b) { return a.c_ == b.c_; }

private:
  std::vector<T> c_;
};

// g(z) = lead*z + b_0 + b_1 z^{-1} + ... + b_M z^{-M}, known modulo z^{-(M+1)}.
template <class T>
class TruncatedLaurentInf {
public:
  TruncatedLaurentInf() : lead_(from_int<T>(1)), b_(1, T(0)) {}
  TruncatedLaurentInf(T lead, std::vector<T> tail) : lead_(std::move(lead)), b_(std::move(tail)) {
    if (b_.empty()) b_.assign(1, T(0));
  }

  static TruncatedLaurentInf identity(int order) {
    return TruncatedLaurentInf(from_int<T>(1), std::vector<T>(order + 1, T(0)));
  }

  int order() const { return static_cast<int>(b_.size()) - 1; }
  const T& lead() const { return lead_; }
  const T& operator[](int k) const { return b_.at(static_cast<std::size_t>(k)); }
  T& operator[](int k) { return b_.at(static_cast<std::size_t>(k)); }
  std::span<const T> coeffs() const { return b_; }

  TruncatedLaurentInf padded(int order) const {
    auto v = b_;
    if (order + 1 > static_cast<int>(v.size())) v.resize(order + 1, T(0));
    return TruncatedLaurentInf(lead_, std::move(v));
  }
  bool in_aut_plus() const { return ScalarTraits<T>::is_one(lead_); }

  friend bool operator==(const TruncatedLaurentInf& a, const TruncatedLaurentInf& b) {
    return a.lead_ == b.lead_ && a.b_ == b.b_;
  }

private:
  T lead_;
  std::vector<T> b_;
};

// Finite Laurent polynomial sum_{p=low}^{high} c[p-low] z^p, exact for low..high.
template <class T>
struct LaurentPoly {
  int low = 0;
  std::vector<T> c;

  int high() const { return low + static_cast<int>(c.size()) - 1; }
  T at(int p) const {
    if (p < low || p > high()) return T(0);
    return c[static_cast<std::size_t>(p - low)];
  }
};

// ---------------------------------------------------------------- arithmetic

template <class T>
TruncatedTaylor<T> operator+(const TruncatedTaylor<T>& f, const TruncatedTaylor<T>& g) {
  int n = std::min(f.order(), g.order());
  auto r = TruncatedTaylor<T>::zero(n);
  for (int k = 0; k <= n; ++k) r[k] = f[k] + g[k];
  return r;
}

template <class T>
TruncatedTaylor<T> operator-(const TruncatedTaylor<T>& f, const TruncatedTaylor<T>& g) {
  int n = std::min(f.order(), g.order());
  auto r = TruncatedTaylor<T>::zero(n);
  for (int k = 0; k <= n; ++k) r[k] = f[k] - g[k];
  return r;
}

template <class T>
TruncatedTaylor<T> operator*(const T& s, const TruncatedTaylor<T>& f) {
  auto r = f;
  for (int k = 0; k <= f.order(); ++k) r[k] = s * f[k];
  return r;
}

template <class T>
TruncatedTaylor<T> mul(const TruncatedTaylor<T>& f, const TruncatedTaylor<T>& g) {
  int n = std::min(f.order(), g.order());
  auto r = TruncatedTaylor<T>::zero(n);
  for (int i = 0; i <= n; ++i) {
    if (is_zero(f[i])) continue;
    for (int j = 0; i + j <= n; ++j) r[i + j] += f[i] * g[j];
  }
  return r;
}

template <class T>
TruncatedTaylor<T> operator*(const TruncatedTaylor<T>& f, const TruncatedTaylor<T>& g) {
  return mul(f, g);
}

// f/g by triangular recursion; g must have an invertible constant term.
template <class T>
TruncatedTaylor<T> div(const TruncatedTaylor<T>& f, const TruncatedTaylor<T>& g) {
  if (is_zero(g[0])) fail(ErrorKind::ZeroLeadingCoefficient, "division by a series with zero constant term");
  int n = std::min(f.order(), g.order());
  auto q = TruncatedTaylor<T>::zero(n);
  T inv = T(1) / g[0];
  for (int k = 0; k <= n; ++k) {
    T acc = f[k];
    for (int j = 1; j <= k; ++j) acc -= g[j] * q[k - j];
    q[k] = acc * inv;
  }
  return q;
}

template <class T>
TruncatedTaylor<T> derivative(const TruncatedTaylor<T>& f) {
  if (f.order() < 1) fail(ErrorKind::InsufficientOrder, "derivative needs order >= 1");
  auto d = TruncatedTaylor<T>::zero(f.order() - 1);
  for (int k = 1; k <= f.order(); ++k) d[k - 1] = from_int<T>(k) * f[k];
  return d;
}

// Antiderivative with the given constant; raises the order by one.
template <class T>
TruncatedTaylor<T> integral(const TruncatedTaylor<T>& f, const T& constant) {
  auto r = TruncatedTaylor<T>::zero(f.order() + 1);
  r[0] = constant;
  for (int k = 0; k <= f.order(); ++k) r[k + 1] = f[k] / from_int<T>(k + 1);
  return r;
}

// log f = log f_0 + integral(f'/f). Rational backends require f_0 = 1.
template <class T>
TruncatedTaylor<T> log(const TruncatedTaylor<T>& f) {
  if (is_zero(f[0])) fail(ErrorKind::ZeroLeadingCoefficient, "log of a series with zero constant term");
  if (f.order() == 0) return TruncatedTaylor<T>::constant(ScalarTraits<T>::log(f[0]), 0);
  return integral(div(derivative(f), f.truncated(f.order() - 1)), ScalarTraits<T>::log(f[0]));
}

// exp via E' = f'E, E_n = (1/n) sum_k k f_k E_{n-k}.
template <class T>
TruncatedTaylor<T> exp(const TruncatedTaylor<T>& f) {
  int n = f.order();
  auto e = TruncatedTaylor<T>::zero(n);
  e[0] = ScalarTraits<T>::exp(f[0]);
  for (int m = 1; m <= n; ++m) {
    T acc(0);
    for (int k = 1; k <= m; ++k) acc += from_int<T>(k) * f[k] * e[m - k];
    e[m] = acc / from_int<T>(m);
  }
  return e;
}

enum class ArithmeticKind { Mul, Div, Log, Exp, Derivative };

// Dispatcher over the elementary operations; unary kinds ignore g.
template <class T>
TruncatedTaylor<T> arithmetic(const TruncatedTaylor<T>& f, const TruncatedTaylor<T>& g, ArithmeticKind kind) {
  switch (kind) {
    case ArithmeticKind::Mul: return mul(f, g);
    case ArithmeticKind::Div: return div(f, g);
    case ArithmeticKind::Log: return log(f);
    case ArithmeticKind::Exp: return exp(f);
    case ArithmeticKind::Derivative: return derivative(f);
  }
  return f;
}

// ---------------------------------------------------------------- composition

// f(g(z)) by Horner; g must vanish at the origin.
template <class T>
TruncatedTaylor<T> compose(const TruncatedTaylor<T>& f, const TruncatedTaylor<T>& g) {
  if (!is_zero(g[0])) fail(ErrorKind::NonzeroConstantTerm, "inner series of a composition must vanish at 0");
  int n = std::min(f.order(), g.order());
  auto r = TruncatedTaylor<T>::constant(f[n], n);
  auto gn = g.truncated(n);
  for (int k = n - 1; k >= 0; --k) {
    r = mul(r, gn);
    r[0] += f[k];
  }
  return r;
}

// Compositional inverse h with f(h(z)) = z, solved coefficient by coefficient.
template <class T>
TruncatedTaylor<T> reversion(const TruncatedTaylor<T>& f) {
  if (!is_zero(f[0])) fail(ErrorKind::NonzeroConstantTerm, "reversion needs f(0) = 0");
  if (f.order() < 1 || is_zero(f[1])) fail(ErrorKind::ZeroLeadingCoefficient, "reversion needs a_1 != 0");
  int n = f.order();
  auto h = TruncatedTaylor<T>::zero(n);
  T inv = T(1) / f[1];
  h[1] = inv;
  // With h_m still zero, [z^m] f(h) is everything except the a_1 h_m term.
  for (int m = 2; m <= n; ++m) {
    T residual = compose(f.truncated(m), h.truncated(m))[m];
    h[m] = -residual * inv;
  }
  return h;
}

// ---------------------------------------------------------------- inversion map

// g(z) = 1/f(1/z) for f = a_1 z + ... ; order of g is order(f) - 2.
template <class T>
TruncatedLaurentInf<T> invert_at_infinity(const TruncatedTaylor<T>& f) {
  if (!is_zero(f[0])) fail(ErrorKind::NonzeroConstantTerm, "inversion needs f(0) = 0");
  if (f.order() < 2) fail(ErrorKind::InsufficientOrder, "inversion needs order >= 2");
  if (is_zero(f[1])) fail(ErrorKind::ZeroLeadingCoefficient, "inversion needs a_1 != 0");
  int n = f.order();
  auto fz = TruncatedTaylor<T>::zero(n - 1);
  for (int k = 0; k <= n - 1; ++k) fz[k] = f[k + 1];
  auto q = div(TruncatedTaylor<T>::constant(from_int<T>(1), n - 1), fz);
  std::vector<T> tail(static_cast<std::size_t>(n - 1));
  for (int k = 0; k <= n - 2; ++k) tail[k] = q[k + 1];
  return TruncatedLaurentInf<T>(q[0], std::move(tail));
}

// f(z) = 1/g(1/z); inverse of the map above, order(f) = order(g) + 2.
template <class T>
TruncatedTaylor<T> invert_at_infinity(const TruncatedLaurentInf<T>& g) {
  if (is_zero(g.lead())) fail(ErrorKind::ZeroLeadingCoefficient, "inversion needs a nonzero leading coefficient");
  int m = g.order();
  auto gz = TruncatedTaylor<T>::zero(m + 1);
  gz[0] = g.lead();
  for (int k = 0; k <= m; ++k) gz[k + 1] = g[k];
  auto q = div(TruncatedTaylor<T>::constant(from_int<T>(1), m + 1), gz);
  auto f = TruncatedTaylor<T>::zero(m + 2);
  for (int k = 0; k <= m + 1; ++k) f[k + 1] = q[k];
  return f;
}

// ---------------------------------------------------------------- reciprocals

// Laurent coefficients of 1/f for f = a_1 z + ...: element j is the
// coefficient of z^{j-1}, for j = 0..order(f)-1.
template <class T>
std::vector<T> reciprocal_coeffs(const TruncatedTaylor<T>& f) {
  if (!is_zero(f[0])) fail(ErrorKind::NonzeroConstantTerm, "reciprocal expects f(0) = 0");
  if (f.order() < 1 || is_zero(f[1])) fail(ErrorKind::ZeroLeadingCoefficient, "reciprocal needs a_1 != 0");
  int n = f.order();
  auto fz = TruncatedTaylor<T>::zero(n - 1);
  for (int k = 0; k <= n - 1; ++k) fz[k] = f[k + 1];
  auto q = div(TruncatedTaylor<T>::constant(from_int<T>(1), n - 1), fz);
  return std::vector<T>(q.coeffs().begin(), q.coeffs().end());
}

// For g = lead z + b_0 + b_1/z + ...: returns p_1..p_{M+2} with
// 1/g = sum_n p_n z^{-n}, via p_1 = 1/lead, p_k = -(sum_{i=0}^{k-2} b_i p_{k-1-i})/lead.
template <class T>
std::vector<T> reciprocal_coeffs(const TruncatedLaurentInf<T>& g) {
  if (is_zero(g.lead())) fail(ErrorKind::ZeroLeadingCoefficient, "reciprocal needs a nonzero leading coefficient");
  int count = g.order() + 2;
  std::vector<T> p(static_cast<std::size_t>(count + 1), T(0));  // p[0] unused
  T inv = T(1) / g.lead();
  p[1] = inv;
  for (int k = 2; k <= count; ++k) {
    T acc(0);
    for (int i = 0; i <= k - 2; ++i) acc += g[i] * p[k - 1 - i];
    p[k] = -acc * inv;
  }
  return std::vector<T>(p.begin() + 1, p.end());
}

// ---------------------------------------------------------------- Schwarzian

// S(f) = y' - y^2/2 with y = f''/f'; order(S) = order(f) - 3.
template <class T>
TruncatedTaylor<T> schwarzian(const TruncatedTaylor<T>& f) {
  if (f.order() < 3) fail(ErrorKind::InsufficientOrder, "Schwarzian needs order >= 3");
  auto d1 = derivative(f);
  if (is_zero(d1[0])) fail(ErrorKind::ZeroLeadingCoefficient, "Schwarzian needs f'(0) != 0");
  auto d2 = derivative(d1);
  auto y = div(d2, d1.truncated(d2.order()));
  auto yp = derivative(y);
  auto y2 = mul(y, y).truncated(yp.order());
  T half = T(1) / from_int<T>(2);
  return yp - half * y2;
}

template <class T>
TruncatedTaylor<T> schwarzian(const TruncatedTaylor<T>& f, int order) {
  return schwarzian(f).truncated(order);
}

// Indices n (affine coordinate c_n = a_{n+1}) with |c_n| > n + 1.
template <class T>
std::vector<int> debranges_check(const TruncatedTaylor<T>& f) {
  std::vector<int> violated;
  for (int n = 1; n + 1 <= f.order(); ++n)
    if (ScalarTraits<T>::abs_greater(f[n + 1], n + 1)) violated.push_back(n);
  return violated;
}

// ---------------------------------------------------------------- named maps

template <class T>
TruncatedTaylor<T> koebe(int order) {
  auto k = TruncatedTaylor<T>::zero(order);
  for (int n = 1; n <= order; ++n) k[n] = from_int<T>(n);
  return k;
}

template <class T>
TruncatedTaylor<Complex> to_complex(const TruncatedTaylor<T>& f) {
  auto r = TruncatedTaylor<Complex>::zero(f.order());
  for (int k = 0; k <= f.order(); ++k) r[k] = ScalarTraits<T>::to_complex(f[k]);
  return r;
}

template <class T>
TruncatedLaurentInf<Complex> to_complex(const TruncatedLaurentInf<T>& g) {
  std::vector<Complex> tail;
  for (int k = 0; k <= g.order(); ++k) tail.push_back(ScalarTraits<T>::to_complex(g[k]));
  return TruncatedLaurentInf<Complex>(ScalarTraits<T>::to_complex(g.lead()), std::move(tail));
}

inline Complex evaluate(const TruncatedTaylor<Complex>& f, Complex z) {
  Complex acc{};
  for (int k = f.order(); k >= 0; --k) acc = acc * z + f[k];
  return acc;
}

inline Complex evaluate(const TruncatedLaurentInf<Complex>& g, Complex z) {
  Complex u = 1.0 / z;
  Complex acc{};
  for (int k = g.order(); k >= 0; --k) acc = acc * u + g[k];
  return g.lead() * z + acc;
}

} // namespace loewner
