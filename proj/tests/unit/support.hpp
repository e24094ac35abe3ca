#pragma once

#include <random>

#include "loewner/series.hpp"

namespace testing_support {

using loewner::Complex;
using loewner::Rational;
using loewner::TruncatedLaurentInf;
using loewner::TruncatedTaylor;

inline Rational random_rational(std::mt19937_64& rng, int span = 5, int den = 4) {
  std::uniform_int_distribution<int> num(-span, span);
  std::uniform_int_distribution<int> de(1, den);
  Rational r(num(rng), de(rng));
  r.canonicalize();
  return r;
}

inline Complex random_complex(std::mt19937_64& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  return {u(rng), u(rng)};
}

// a_1 = 1, a_0 = 0, remaining coefficients random.
inline TruncatedTaylor<Rational> random_normalized_rational(std::mt19937_64& rng, int order) {
  auto f = TruncatedTaylor<Rational>::identity(order);
  for (int k = 2; k <= order; ++k) f[k] = random_rational(rng);
  return f;
}

inline TruncatedTaylor<Complex> random_normalized_complex(std::mt19937_64& rng, int order, double scale = 0.3) {
  auto f = TruncatedTaylor<Complex>::identity(order);
  for (int k = 2; k <= order; ++k) f[k] = random_complex(rng, scale);
  return f;
}

inline TruncatedLaurentInf<Rational> random_laurent_rational(std::mt19937_64& rng, int order) {
  std::vector<Rational> tail;
  for (int k = 0; k <= order; ++k) tail.push_back(random_rational(rng));
  return TruncatedLaurentInf<Rational>(Rational(1), tail);
}

inline double max_abs_diff(const TruncatedTaylor<Complex>& a, const TruncatedTaylor<Complex>& b) {
  double m = 0;
  int n = std::min(a.order(), b.order());
  for (int k = 0; k <= n; ++k) m = std::max(m, std::abs(a[k] - b[k]));
  return m;
}

// Plain dense polynomial product, the school-book oracle.
template <class T>
std::vector<T> poly_mul(const std::vector<T>& a, const std::vector<T>& b) {
  std::vector<T> r(a.size() + b.size() - 1, T(0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  return r;
}

} // namespace testing_support
