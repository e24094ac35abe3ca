#pragma once

// Coefficient backends: exact rationals (GMP) and double-precision complex.

#include <cmath>
#include <complex>
#include <string>

#include <gmpxx.h>

#include "loewner/error.hpp"

namespace loewner {

using Rational = mpq_class;
using Complex = std::complex<double>;

template <class T>
struct ScalarTraits;

template <>
struct ScalarTraits<Rational> {
  static constexpr bool exact = true;
  static Rational from_int(long v) { return Rational(v); }
  static bool is_zero(const Rational& x) { return sgn(x) == 0; }
  static bool is_one(const Rational& x) { return cmp(x, 1) == 0; }
  static Complex to_complex(const Rational& x) { return {x.get_d(), 0.0}; }
  static double magnitude(const Rational& x) { return std::abs(x.get_d()); }
  // Exact magnitude comparison |x| > bound.
  static bool abs_greater(const Rational& x, long bound) { return cmp(abs(x), bound) > 0; }
  static Rational log(const Rational& x) {
    if (!is_one(x)) fail(ErrorKind::InexactOperation, "log of rational constant " + x.get_str() + " is not rational");
    return Rational(0);
  }
  static Rational exp(const Rational& x) {
    if (!is_zero(x)) fail(ErrorKind::InexactOperation, "exp of nonzero rational constant is not rational");
    return Rational(1);
  }
  static std::string to_string(const Rational& x) { return x.get_str(); }
};

template <>
struct ScalarTraits<Complex> {
  static constexpr bool exact = false;
  static Complex from_int(long v) { return {static_cast<double>(v), 0.0}; }
  static bool is_zero(const Complex& x) { return x == Complex{}; }
  static bool is_one(const Complex& x) { return x == Complex{1.0, 0.0}; }
  static Complex to_complex(const Complex& x) { return x; }
  static double magnitude(const Complex& x) { return std::abs(x); }
  static bool abs_greater(const Complex& x, long bound) { return std::abs(x) > static_cast<double>(bound); }
  static Complex log(const Complex& x) { return std::log(x); }
  static Complex exp(const Complex& x) { return std::exp(x); }
  static std::string to_string(const Complex& x) {
    return "(" + std::to_string(x.real()) + "," + std::to_string(x.imag()) + ")";
  }
};

template <class T>
T from_int(long v) {
  return ScalarTraits<T>::from_int(v);
}

template <class T>
bool is_zero(const T& x) {
  return ScalarTraits<T>::is_zero(x);
}

// Parses "p/q", "p" or a decimal literal into an exact rational.
Rational parse_rational(const std::string& text);

} // namespace loewner
