#pragma once

// Grunsky coefficients, Faber polynomials and the Siegel-disc embedding.
//
// Blocks are stored as BivariateTruncated with nonnegative indices:
//   c (sector ++):  log((f(z)-f(w))/(z-w)) = -sum c_mn z^m w^n
//   d (sector --):  log((g(z)-g(w))/(z-w)) = -sum d_mn z^-m w^-n
//   e (sector +-):  log((f(z)-g(w))/(z-w)) = -sum e_mn z^m w^-n
// Every block is complete for 0 <= m, n <= N, which needs f known to
// order 2N+1 and g known to order 2N-1.

#include <cmath>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "loewner/bivariate.hpp"
#include "loewner/series.hpp"

namespace loewner {

template <class T>
struct GrunskyData {
  int N = 0;
  std::optional<BivariateTruncated<T>> c;
  std::optional<BivariateTruncated<T>> d;
  std::optional<BivariateTruncated<T>> e;
  T r = T(1);
  T R = T(1);

  // Unified coefficients b_{p,q}; the mixed entries are the coefficients of
  // -log((g(w)-f(z))/w), so b_{n,-m} = e_mn + delta_mn / n.
  T b(int p, int q) const {
    if (p > q) std::swap(p, q);
    // now p <= q
    if (q <= 0) return block(c, "c")(-p, -q);
    if (p >= 1) return block(d, "d")(p, q);
    if (p == 0) return block(e, "e")(0, q);
    T v = block(e, "e")(-p, q);
    if (-p == q) v += T(1) / from_int<T>(q);
    return v;
  }

private:
  static const BivariateTruncated<T>& block(const std::optional<BivariateTruncated<T>>& blk, const char* name) {
    if (!blk) fail(ErrorKind::InsufficientOrder, std::string("Grunsky block ") + name + " was not computed");
    return *blk;
  }
};

namespace detail {

inline void require_degree(int N) {
  if (N < 1) fail(ErrorKind::InsufficientOrder, "Grunsky degree must be >= 1");
}

template <class T>
BivariateTruncated<T> negate(BivariateTruncated<T> m) {
  for (int i = 0; i <= m.degree(); ++i)
    for (int j = 0; j <= m.degree(); ++j) m(i, j) = -m(i, j);
  return m;
}

template <class T>
BivariateTruncated<T> c_block(const TruncatedTaylor<T>& f, int N) {
  if (!is_zero(f[0])) fail(ErrorKind::NonzeroConstantTerm, "Grunsky c-block expects f(0) = 0");
  if (f.order() < 2 * N + 1)
    fail(ErrorKind::InsufficientOrder, "c-block of degree N needs f to order 2N+1");
  BivariateTruncated<T> q(N, Sector::PlusPlus);
  for (int i = 0; i <= N; ++i)
    for (int j = 0; j <= N; ++j) q(i, j) = f[i + j + 1];
  if (is_zero(q(0, 0))) fail(ErrorKind::DegenerateDiagonal, "difference quotient of f vanishes on the diagonal");
  return negate(log(q));
}

template <class T>
BivariateTruncated<T> d_block(const TruncatedLaurentInf<T>& g, int N) {
  if (g.order() < 2 * N - 1)
    fail(ErrorKind::InsufficientOrder, "d-block of degree N needs g to order 2N-1");
  BivariateTruncated<T> q(N, Sector::MinusMinus);
  q(0, 0) = g.lead();
  for (int p = 1; p <= N; ++p)
    for (int s = 1; s <= N; ++s) q(p, s) = -g[p + s - 1];
  if (is_zero(q(0, 0))) fail(ErrorKind::DegenerateDiagonal, "difference quotient of g vanishes on the diagonal");
  return negate(log(q));
}

template <class T>
BivariateTruncated<T> e_block(const TruncatedTaylor<T>& f, const TruncatedLaurentInf<T>& g, int N) {
  if (!is_zero(f[0])) fail(ErrorKind::NonzeroConstantTerm, "Grunsky e-block expects f(0) = 0");
  if (f.order() < N) fail(ErrorKind::InsufficientOrder, "e-block of degree N needs f to order N");
  if (g.order() < N - 1) fail(ErrorKind::InsufficientOrder, "e-block of degree N needs g to order N-1");
  // (g(w) - f(z))/w in (z, v = 1/w).
  BivariateTruncated<T> num(N, Sector::PlusMinus);
  num(0, 0) = g.lead();
  num(0, 1) += g[0];
  for (int m = 1; m <= N; ++m) num(m, 1) -= f[m];
  for (int k = 1; k + 1 <= N; ++k) num(0, k + 1) += g[k];
  if (is_zero(num(0, 0))) fail(ErrorKind::DegenerateDiagonal, "mixed kernel has a vanishing unit part");
  auto l = log(num);
  // log((w - z)/w) = -sum (z v)^k / k
  for (int k = 1; k <= N; ++k) l(k, k) += T(1) / from_int<T>(k);
  return negate(l);
}

} // namespace detail

template <class T>
GrunskyData<T> grunsky_single(const TruncatedTaylor<T>& f, int N) {
  detail::require_degree(N);
  GrunskyData<T> out;
  out.N = N;
  out.c = detail::c_block(f, N);
  out.r = f[1];
  return out;
}

template <class T>
GrunskyData<T> grunsky_single(const TruncatedLaurentInf<T>& g, int N) {
  detail::require_degree(N);
  GrunskyData<T> out;
  out.N = N;
  out.d = detail::d_block(g, N);
  out.R = g.lead();
  return out;
}

template <class T>
GrunskyData<T> grunsky_pair(const TruncatedTaylor<T>& f, const TruncatedLaurentInf<T>& g, int N) {
  detail::require_degree(N);
  GrunskyData<T> out;
  out.N = N;
  out.c = detail::c_block(f, N);
  out.d = detail::d_block(g, N);
  out.e = detail::e_block(f, g, N);
  out.r = f[1];
  out.R = g.lead();
  return out;
}

// --------------------------------------------------------------- Faber

// G[n] holds the coefficients of G_n in w (index = power), F[n] those of
// F_n in s = 1/w. Index 0 of each list is unused.
template <class T>
struct FaberSet {
  int N = 0;
  std::vector<std::vector<T>> G;
  std::vector<std::vector<T>> F;
};

// log((g(z) - w)/(R z)) = -sum G_n(w) z^-n / n
template <class T>
std::vector<std::vector<T>> faber_G(const TruncatedLaurentInf<T>& g, int N) {
  detail::require_degree(N);
  if (is_zero(g.lead())) fail(ErrorKind::ZeroLeadingCoefficient, "Faber polynomials need R != 0");
  if (g.order() < N - 1) fail(ErrorKind::InsufficientOrder, "G_1..G_N need g to order N-1");
  // Variables (u = 1/z, w).
  BivariateTruncated<T> m(N, Sector::PlusPlus);
  T inv = T(1) / g.lead();
  m(0, 0) = from_int<T>(1);
  m(1, 0) += g[0] * inv;
  m(1, 1) -= inv;
  for (int k = 1; k + 1 <= N; ++k) m(k + 1, 0) += g[k] * inv;
  auto l = log(m);
  std::vector<std::vector<T>> G(static_cast<std::size_t>(N + 1));
  for (int n = 1; n <= N; ++n) {
    G[n].assign(static_cast<std::size_t>(n + 1), T(0));
    for (int j = 0; j <= n; ++j) G[n][j] = -from_int<T>(n) * l(n, j);
  }
  return G;
}

// log((w - f(z))/w) = log(f(z)/(r z)) - sum F_n(w) z^n / n
template <class T>
std::vector<std::vector<T>> faber_F(const TruncatedTaylor<T>& f, int N) {
  detail::require_degree(N);
  if (!is_zero(f[0])) fail(ErrorKind::NonzeroConstantTerm, "Faber polynomials F_n expect f(0) = 0");
  if (is_zero(f[1])) fail(ErrorKind::ZeroLeadingCoefficient, "Faber polynomials need r != 0");
  if (f.order() < N + 1) fail(ErrorKind::InsufficientOrder, "F_1..F_N need f to order N+1");
  // Variables (z, s = 1/w): 1 - s f(z)
  BivariateTruncated<T> m(N, Sector::PlusMinus);
  m(0, 0) = from_int<T>(1);
  for (int k = 1; k <= N; ++k) m(k, 1) -= f[k];
  auto l = log(m);
  auto fz = TruncatedTaylor<T>::zero(N);
  T inv = T(1) / f[1];
  for (int k = 0; k <= N; ++k) fz[k] = f[k + 1] * inv;
  auto lf = log(fz);
  std::vector<std::vector<T>> F(static_cast<std::size_t>(N + 1));
  for (int n = 1; n <= N; ++n) {
    F[n].assign(static_cast<std::size_t>(n + 1), T(0));
    for (int j = 0; j <= n; ++j) F[n][j] = from_int<T>(n) * (-l(n, j));
    F[n][0] += from_int<T>(n) * lf[n];
  }
  return F;
}

template <class T>
FaberSet<T> faber(const TruncatedLaurentInf<T>& g, int N) {
  return FaberSet<T>{N, faber_G(g, N), {}};
}

template <class T>
FaberSet<T> faber(const TruncatedTaylor<T>& f, int N) {
  return FaberSet<T>{N, {}, faber_F(f, N)};
}

template <class T>
FaberSet<T> faber(const TruncatedTaylor<T>& f, const TruncatedLaurentInf<T>& g, int N) {
  return FaberSet<T>{N, faber_G(g, N), faber_F(f, N)};
}

// --------------------------------------------------------------- evaluation of Faber polynomials

// P(f(z)) for a polynomial P in w; result is Taylor of order order(f).
template <class T>
TruncatedTaylor<T> poly_of_taylor(const std::vector<T>& P, const TruncatedTaylor<T>& f) {
  auto acc = TruncatedTaylor<T>::zero(f.order());
  for (int j = static_cast<int>(P.size()) - 1; j >= 0; --j) {
    acc = mul(acc, f);
    acc[0] += P[j];
  }
  return acc;
}

// P(g(z)) for a polynomial P of degree n in w. With g = z T(1/z) the
// powers z^n down to z^{n - order(g) - 1} are exact.
template <class T>
LaurentPoly<T> poly_of_laurent(const std::vector<T>& P, const TruncatedLaurentInf<T>& g) {
  int n = static_cast<int>(P.size()) - 1;
  int depth = g.order() + 1;  // T(u) known to u^depth
  auto tu = TruncatedTaylor<T>::zero(depth);
  tu[0] = g.lead();
  for (int k = 0; k <= g.order(); ++k) tu[k + 1] = g[k];
  LaurentPoly<T> out;
  out.low = n - depth;
  out.c.assign(static_cast<std::size_t>(depth + 1), T(0));
  auto power = TruncatedTaylor<T>::constant(from_int<T>(1), depth);
  for (int j = 0; j <= n; ++j) {
    if (j > 0) power = mul(power, tu);
    // z^j T(u)^j contributes z^{j-k} with coefficient [u^k] T^j.
    for (int k = 0; k <= depth; ++k) {
      int p = j - k;
      if (p < out.low) continue;
      out.c[static_cast<std::size_t>(p - out.low)] += P[j] * power[k];
    }
  }
  return out;
}

// Q(1/f(z)) for a polynomial Q in s = 1/w. With 1/f = z^{-1} q(z),
// powers z^{-n} .. z^{order(f) - 1 - n} are exact.
template <class T>
LaurentPoly<T> poly_of_reciprocal(const std::vector<T>& Q, const TruncatedTaylor<T>& f) {
  int n = static_cast<int>(Q.size()) - 1;
  auto qv = reciprocal_coeffs(f);
  auto q = TruncatedTaylor<T>(std::vector<T>(qv.begin(), qv.end()));
  int depth = q.order();
  LaurentPoly<T> out;
  out.low = -n;
  int high = depth - n;
  out.c.assign(static_cast<std::size_t>(high - out.low + 1), T(0));
  auto power = TruncatedTaylor<T>::constant(from_int<T>(1), depth);
  for (int j = 0; j <= n; ++j) {
    if (j > 0) power = mul(power, q);
    for (int k = 0; k <= depth; ++k) {
      int p = k - j;
      if (p > high) continue;
      out.c[static_cast<std::size_t>(p - out.low)] += Q[j] * power[k];
    }
  }
  return out;
}

// Q(1/g(z)) for a polynomial Q in s. With 1/g = u P(u), u = 1/z, powers
// u^0 .. u^{order(g)+1} are exact.
template <class T>
LaurentPoly<T> poly_of_reciprocal(const std::vector<T>& Q, const TruncatedLaurentInf<T>& g) {
  int n = static_cast<int>(Q.size()) - 1;
  auto p = reciprocal_coeffs(g);  // p_1..p_{M+2}
  int depth = g.order() + 1;
  auto pu = TruncatedTaylor<T>::zero(depth);
  for (int k = 0; k <= depth; ++k) pu[k] = p[k];
  std::vector<T> byu(static_cast<std::size_t>(depth + 1), T(0));
  auto power = TruncatedTaylor<T>::constant(from_int<T>(1), depth);
  for (int j = 0; j <= n; ++j) {
    if (j > 0) power = mul(power, pu);
    for (int k = 0; k + j <= depth; ++k) byu[k + j] += Q[j] * power[k];
  }
  LaurentPoly<T> out;
  out.low = -depth;
  out.c.assign(static_cast<std::size_t>(depth + 1), T(0));
  for (int k = 0; k <= depth; ++k) out.c[static_cast<std::size_t>(depth - k)] = byu[k];
  return out;
}

// Largest coefficient mismatch of the four Faber-Grunsky identities
// (valid for r = R = 1) over the indices complete at degree N.
struct FaberGrunskyResiduals {
  double G_of_g = 0;
  double G_of_f = 0;
  double F_of_g = 0;
  double F_of_f = 0;
  double max() const { return std::max(std::max(G_of_g, G_of_f), std::max(F_of_g, F_of_f)); }
};

template <class T>
FaberGrunskyResiduals faber_grunsky_identities(const TruncatedTaylor<T>& f, const TruncatedLaurentInf<T>& g, int N) {
  auto data = grunsky_pair(f, g, N);
  auto fs = faber(f, g, N);
  auto mag = [](const T& x) { return ScalarTraits<T>::magnitude(x); };
  FaberGrunskyResiduals r;
  for (int n = 1; n <= N; ++n) {
    T nn = from_int<T>(n);
    auto gg = poly_of_laurent(fs.G[n], g);
    for (int m = -N; m <= n; ++m) {
      T want = m == n ? from_int<T>(1) : T(0);
      if (m < 0) want = nn * data.b(n, -m);
      r.G_of_g = std::max(r.G_of_g, mag(gg.at(m) - want));
    }
    auto gf = poly_of_taylor(fs.G[n], f);
    for (int m = 0; m <= N; ++m) {
      T want = nn * data.b(n, -m);
      r.G_of_f = std::max(r.G_of_f, mag(gf[m] - want));
    }
    auto fg = poly_of_reciprocal(fs.F[n], g);
    for (int k = 0; k <= N; ++k) {
      T want = k == 0 ? T(-nn * data.b(-n, 0)) : T(nn * data.b(k, -n));
      r.F_of_g = std::max(r.F_of_g, mag(fg.at(-k) - want));
    }
    auto ff = poly_of_reciprocal(fs.F[n], f);
    for (int k = -n; k <= N; ++k) {
      T want = k == -n ? from_int<T>(1) : T(0);
      if (k >= 1) want = nn * data.b(-n, -k);
      r.F_of_f = std::max(r.F_of_f, mag(ff.at(k) - want));
    }
  }
  return r;
}

// --------------------------------------------------------------- Siegel disc

// Z_nm = sqrt(n m) c_nm for 1 <= n, m <= N.
struct SiegelPoint {
  Eigen::MatrixXcd Z;
  std::string weighting = "sqrt(nm)";
};

struct SiegelReport {
  bool symmetric = false;
  double spectral_gap = 0;
  double kahler_potential = 0;
};

// Gap 1 - lambda_max(Z*Z) without the disc-membership test.
double siegel_gap(const SiegelPoint& point);

// Throws NotInDisc when the gap is at most 1e-12.
SiegelReport siegel_check(const SiegelPoint& point);

template <class T>
SiegelPoint siegel_point(const GrunskyData<T>& data) {
  SiegelPoint p;
  int N = data.N;
  p.Z.resize(N, N);
  for (int n = 1; n <= N; ++n)
    for (int m = 1; m <= N; ++m)
      p.Z(n - 1, m - 1) = std::sqrt(static_cast<double>(n * m)) * ScalarTraits<T>::to_complex(data.b(-n, -m));
  return p;
}

template <class T>
struct YkEmbedding {
  SiegelPoint point;
  std::vector<LaurentPoly<T>> by_composition;  // index n = 1..N, index 0 empty
  std::vector<LaurentPoly<T>> by_grunsky;
  double consistency = 0;  // max coefficient mismatch between the two routes on z^-n..z^N
};

template <class T>
YkEmbedding<T> yk_embedding(const TruncatedTaylor<T>& f, int N) {
  auto data = grunsky_single(f, N);
  auto F = faber_F(f, N);
  YkEmbedding<T> out;
  out.point = siegel_point(data);
  out.by_composition.resize(static_cast<std::size_t>(N + 1));
  out.by_grunsky.resize(static_cast<std::size_t>(N + 1));
  for (int n = 1; n <= N; ++n) {
    auto full = poly_of_reciprocal(F[n], f);
    LaurentPoly<T> comp;
    comp.low = -n;
    comp.c.assign(static_cast<std::size_t>(N + n + 1), T(0));
    for (int k = -n; k <= N; ++k) comp.c[static_cast<std::size_t>(k + n)] = full.at(k);
    LaurentPoly<T> row;
    row.low = -n;
    row.c.assign(static_cast<std::size_t>(N + n + 1), T(0));
    row.c[0] = from_int<T>(1);
    for (int m = 1; m <= N; ++m) row.c[static_cast<std::size_t>(m + n)] = from_int<T>(n) * data.b(-n, -m);
    for (int k = -n; k <= N; ++k)
      out.consistency = std::max(out.consistency, ScalarTraits<T>::magnitude(comp.at(k) - row.at(k)));
    out.by_composition[n] = std::move(comp);
    out.by_grunsky[n] = std::move(row);
  }
  return out;
}

// --------------------------------------------------------------- residue operator

enum class Domain { HPlus, HMinus };

// Constant term in w of K(z, w) h(1/w), i.e. output_i = sum_j K_ij h_j.
// A ++ kernel acts on h(z) = sum h_j z^j (H+), a -- kernel on
// h(z) = sum h_j z^-j (H-), a +- kernel on h(z) = sum h_j z^-j (H-).
template <class T>
std::vector<T> residue_operator(const BivariateTruncated<T>& kernel, const std::vector<T>& h, Domain domain) {
  Domain expected = kernel.sector() == Sector::PlusPlus ? Domain::HPlus : Domain::HMinus;
  if (domain != expected) fail(ErrorKind::SectorMismatch, "kernel sector does not match the input space");
  int n = kernel.degree();
  std::vector<T> out(static_cast<std::size_t>(n + 1), T(0));
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n && j < static_cast<int>(h.size()); ++j) out[i] += kernel(i, j) * h[j];
  return out;
}

} // namespace loewner
