#pragma once

// Two-variable series truncated modulo (x^{N+1}, y^{N+1}).
//
// The sector records which sign each exponent carries: ++ means x^i y^j,
// -- means x^{-i} y^{-j}, +- means x^i y^{-j}. Storage always uses the
// nonnegative indices (i, j); only equal sectors combine.

#include <cstddef>
#include <vector>

#include "loewner/error.hpp"
#include "loewner/scalar.hpp"

namespace loewner {

enum class Sector { PlusPlus, MinusMinus, PlusMinus };

inline const char* to_string(Sector s) {
  switch (s) {
    case Sector::PlusPlus: return "++";
    case Sector::MinusMinus: return "--";
    case Sector::PlusMinus: return "+-";
  }
  return "?";
}

template <class T>
class BivariateTruncated {
public:
  BivariateTruncated(int degree, Sector sector)
      : n_(degree), sector_(sector), m_(static_cast<std::size_t>((degree + 1) * (degree + 1)), T(0)) {}

  int degree() const { return n_; }
  Sector sector() const { return sector_; }

  const T& operator()(int i, int j) const { return m_.at(index(i, j)); }
  T& operator()(int i, int j) { return m_.at(index(i, j)); }

  friend bool operator==(const BivariateTruncated& a, const BivariateTruncated& b) {
    return a.n_ == b.n_ && a.sector_ == b.sector_ && a.m_ == b.m_;
  }

private:
  std::size_t index(int i, int j) const {
    if (i < 0 || j < 0 || i > n_ || j > n_) throw std::out_of_range("bivariate index");
    return static_cast<std::size_t>(i * (n_ + 1) + j);
  }

  int n_;
  Sector sector_;
  std::vector<T> m_;
};

namespace detail {
template <class T>
void require_compatible(const BivariateTruncated<T>& a, const BivariateTruncated<T>& b) {
  if (a.sector() != b.sector()) fail(ErrorKind::SectorMismatch, "bivariate operands live in different sectors");
  if (a.degree() != b.degree()) fail(ErrorKind::InsufficientOrder, "bivariate operands have different degrees");
}
} // namespace detail

template <class T>
BivariateTruncated<T> operator+(const BivariateTruncated<T>& a, const BivariateTruncated<T>& b) {
  detail::require_compatible(a, b);
  BivariateTruncated<T> r(a.degree(), a.sector());
  for (int i = 0; i <= a.degree(); ++i)
    for (int j = 0; j <= a.degree(); ++j) r(i, j) = a(i, j) + b(i, j);
  return r;
}

template <class T>
BivariateTruncated<T> mul(const BivariateTruncated<T>& a, const BivariateTruncated<T>& b) {
  detail::require_compatible(a, b);
  int n = a.degree();
  BivariateTruncated<T> r(n, a.sector());
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j) {
      if (is_zero(a(i, j))) continue;
      for (int k = 0; i + k <= n; ++k)
        for (int l = 0; j + l <= n; ++l) r(i + k, j + l) += a(i, j) * b(k, l);
    }
  return r;
}

template <class T>
BivariateTruncated<T> div(const BivariateTruncated<T>& a, const BivariateTruncated<T>& b) {
  detail::require_compatible(a, b);
  if (is_zero(b(0, 0))) fail(ErrorKind::ZeroLeadingCoefficient, "bivariate division by a vanishing unit part");
  int n = a.degree();
  BivariateTruncated<T> q(n, a.sector());
  T inv = T(1) / b(0, 0);
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j) {
      T acc = a(i, j);
      for (int k = 0; k <= i; ++k)
        for (int l = 0; l <= j; ++l) {
          if (k == 0 && l == 0) continue;
          acc -= b(k, l) * q(i - k, j - l);
        }
      q(i, j) = acc * inv;
    }
  return q;
}

// Logarithm through the Euler operator D = x d/dx + y d/dy: (i+j) L_ij = (DM/M)_ij.
template <class T>
BivariateTruncated<T> log(const BivariateTruncated<T>& m) {
  if (is_zero(m(0, 0))) fail(ErrorKind::ZeroLeadingCoefficient, "bivariate log of a vanishing unit part");
  int n = m.degree();
  BivariateTruncated<T> dm(n, m.sector());
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j) dm(i, j) = from_int<T>(i + j) * m(i, j);
  auto q = div(dm, m);
  BivariateTruncated<T> l(n, m.sector());
  l(0, 0) = ScalarTraits<T>::log(m(0, 0));
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j)
      if (i + j > 0) l(i, j) = q(i, j) / from_int<T>(i + j);
  return l;
}

} // namespace loewner
