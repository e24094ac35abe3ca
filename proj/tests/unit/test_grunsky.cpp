#include "doctest.h"
#include "support.hpp"

#include "loewner/grunsky.hpp"

using namespace loewner;
using namespace testing_support;

namespace {

using RT = TruncatedTaylor<Rational>;
using RL = TruncatedLaurentInf<Rational>;
using Bi = BivariateTruncated<Rational>;

// log(Q) through the alternating series log(Q00) + sum (-1)^{k+1} X^k / k,
// X = Q/Q00 - 1; an oracle independent of the Euler-operator route.
template <class T>
BivariateTruncated<T> log_by_series(const BivariateTruncated<T>& q, T log_q00) {
  int n = q.degree();
  BivariateTruncated<T> x(n, q.sector());
  T inv = T(1) / q(0, 0);
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j) x(i, j) = (i + j == 0) ? T(0) : q(i, j) * inv;
  BivariateTruncated<T> acc(n, q.sector());
  acc(0, 0) = log_q00;
  auto power = x;
  for (int k = 1; k <= 2 * n; ++k) {
    T w = T(k % 2 == 1 ? 1 : -1) / T(k);
    for (int i = 0; i <= n; ++i)
      for (int j = 0; j <= n; ++j) acc(i, j) += w * power(i, j);
    power = mul(power, x);
  }
  return acc;
}

RT rational_poly(std::vector<long> c, int order) {
  std::vector<Rational> v;
  for (long x : c) v.emplace_back(x);
  return RT(v).padded(order);
}

// Random polynomial f = z + ... of degree deg, padded to `order`.
RT random_poly_f(std::mt19937_64& rng, int deg, int order) {
  auto f = random_normalized_rational(rng, deg);
  for (int k = 2; k <= deg; ++k) {
    f[k] /= 4;
    f[k].canonicalize();
  }
  return f.padded(order);
}

RL random_poly_g(std::mt19937_64& rng, int deg, int order) {
  std::vector<Rational> tail;
  for (int k = 0; k <= deg; ++k) tail.push_back(random_rational(rng));
  return RL(Rational(1), tail).padded(order);
}

// Dense Laurent polynomial arithmetic for finite g, used as an oracle.
struct Dense {
  int low;
  std::vector<Rational> c;
  Rational at(int p) const {
    int i = p - low;
    return (i < 0 || i >= static_cast<int>(c.size())) ? Rational(0) : c[i];
  }
};

Dense dense_mul(const Dense& a, const Dense& b) {
  Dense r{a.low + b.low, poly_mul(a.c, b.c)};
  return r;
}

Dense dense_of_laurent(const RL& g) {
  Dense d{-g.order(), std::vector<Rational>(g.order() + 2, Rational(0))};
  for (int k = 0; k <= g.order(); ++k) d.c[g.order() - k] = g[k];
  d.c[g.order() + 1] = g.lead();
  return d;
}

Dense dense_poly_of(const std::vector<Rational>& P, const Dense& x) {
  Dense acc{0, {P[0]}};
  Dense power{0, {Rational(1)}};
  for (std::size_t j = 1; j < P.size(); ++j) {
    power = dense_mul(power, x);
    int low = std::min(acc.low, power.low);
    int high = std::max(acc.low + static_cast<int>(acc.c.size()), power.low + static_cast<int>(power.c.size()));
    Dense sum{low, std::vector<Rational>(high - low, Rational(0))};
    for (int p = low; p < high; ++p) sum.c[p - low] = acc.at(p) + P[j] * power.at(p);
    acc = sum;
  }
  return acc;
}

} // namespace

TEST_CASE("c-block of the identity vanishes") {
  auto data = grunsky_single(RT::identity(11), 5);
  for (int m = 0; m <= 5; ++m)
    for (int n = 0; n <= 5; ++n) CHECK((*data.c)(m, n) == 0);
}

TEST_CASE("c-block of a dilation carries only -log r") {
  auto f = TruncatedTaylor<Complex>::zero(9);
  f[1] = 0.37;
  auto data = grunsky_single(f, 4);
  CHECK(std::abs((*data.c)(0, 0) + std::log(0.37)) < 1e-14);
  for (int m = 0; m <= 4; ++m)
    for (int n = 0; n <= 4; ++n)
      if (m + n > 0) CHECK(std::abs((*data.c)(m, n)) < 1e-14);
  CHECK_THROWS_AS(grunsky_single(rational_poly({0, 2}, 9), 4), Error);
}

TEST_CASE("Koebe c-block against the closed-form factorization") {
  int N = 7;
  auto data = grunsky_single(koebe<Rational>(2 * N + 1), N);
  // log((1 - zw) / ((1-z)^2 (1-w)^2)) = -sum (zw)^k/k + 2 sum z^k/k + 2 sum w^k/k
  for (int m = 0; m <= N; ++m)
    for (int n = 0; n <= N; ++n) {
      Rational want = 0;
      if (m == n && m > 0) want = Rational(1, m);
      if (n == 0 && m > 0) want = Rational(-2, m);
      if (m == 0 && n > 0) want = Rational(-2, n);
      want.canonicalize();
      CHECK((*data.c)(m, n) == want);
    }
}

TEST_CASE("bivariate log agrees with the alternating-series oracle") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 5; ++trial) {
    int N = 2 + trial;
    auto f = random_normalized_rational(rng, 2 * N + 1);
    Bi q(N, Sector::PlusPlus);
    for (int i = 0; i <= N; ++i)
      for (int j = 0; j <= N; ++j) q(i, j) = f[i + j + 1];
    auto want = log_by_series(q, Rational(0));
    auto data = grunsky_single(f, N);
    for (int i = 0; i <= N; ++i)
      for (int j = 0; j <= N; ++j) CHECK((*data.c)(i, j) == -want(i, j));
  }
}

TEST_CASE("property: c and d blocks are symmetric") {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 4; ++trial) {
    int N = 10;
    auto f = random_normalized_complex(rng, 2 * N + 1, 0.2);
    std::vector<Complex> tail;
    for (int k = 0; k <= 2 * N - 1; ++k) tail.push_back(random_complex(rng, 0.2));
    TruncatedLaurentInf<Complex> g(Complex(1), tail);
    auto data = grunsky_pair(f, g, N);
    for (int m = 0; m <= N; ++m)
      for (int n = 0; n <= N; ++n) {
        CHECK(std::abs((*data.c)(m, n) - (*data.c)(n, m)) < 1e-12);
        CHECK(std::abs((*data.d)(m, n) - (*data.d)(n, m)) < 1e-12);
      }
    CHECK(std::abs((*data.d)(0, 0)) < 1e-15);
    CHECK(std::abs((*data.e)(0, 0)) < 1e-15);
  }
  auto fq = random_normalized_rational(rng, 13);
  auto dq = grunsky_single(fq, 6);
  for (int m = 0; m <= 6; ++m)
    for (int n = 0; n <= 6; ++n) CHECK((*dq.c)(m, n) == (*dq.c)(n, m));
}

TEST_CASE("e-block of the pair (r z, z)") {
  double r = 0.6;
  int N = 6;
  auto f = TruncatedTaylor<Complex>::zero(2 * N + 1);
  f[1] = r;
  auto g = TruncatedLaurentInf<Complex>::identity(2 * N - 1);
  auto data = grunsky_pair(f, g, N);
  for (int m = 0; m <= N; ++m)
    for (int n = 0; n <= N; ++n) {
      Complex want = (m == n && n > 0) ? -(1.0 - std::pow(r, n)) / n : 0.0;
      CHECK(std::abs((*data.e)(m, n) - want) < 1e-14);
    }
}

TEST_CASE("d-block of a translation is zero") {
  auto g = TruncatedLaurentInf<Rational>(Rational(1), {Rational(1000)}).padded(9);
  auto data = grunsky_single(g, 5);
  for (int m = 0; m <= 5; ++m)
    for (int n = 0; n <= 5; ++n) CHECK((*data.d)(m, n) == 0);
}

TEST_CASE("d-block of the inversion equals the c-block off the axes") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 5; ++trial) {
    int N = 6;
    auto f = random_normalized_rational(rng, 2 * N + 1);
    auto g = invert_at_infinity(f);
    auto cf = grunsky_single(f, N);
    auto dg = grunsky_single(g, N);
    for (int m = 1; m <= N; ++m)
      for (int n = 1; n <= N; ++n) CHECK((*cf.c)(m, n) == (*dg.d)(m, n));
  }
}

TEST_CASE("Grunsky errors") {
  CHECK_THROWS_AS(grunsky_single(rational_poly({0, 0, 1}, 9), 4), Error);
  try {
    grunsky_single(rational_poly({0, 0, 1}, 9), 4);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DegenerateDiagonal);
  }
  try {
    grunsky_single(RT::identity(8), 4);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InsufficientOrder);
  }
  try {
    grunsky_single(TruncatedLaurentInf<Rational>(Rational(0), std::vector<Rational>(9, Rational(0))), 3);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DegenerateDiagonal);
  }
  Bi a(3, Sector::PlusPlus), b(3, Sector::MinusMinus);
  try {
    mul(a, b);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::SectorMismatch);
  }
}

TEST_CASE("Faber polynomials of simple exteriors") {
  int N = 6;
  auto G = faber_G(RL::identity(N), N);
  for (int n = 1; n <= N; ++n)
    for (int j = 0; j <= n; ++j) CHECK(G[n][j] == (j == n ? 1 : 0));

  Rational b0(3, 2);
  auto Gt = faber_G(RL(Rational(1), {b0}).padded(N), N);
  for (int n = 1; n <= N; ++n) {
    // binomial expansion of (w - b0)^n
    mpz_class binom = 1;
    for (int j = n; j >= 0; --j) {
      Rational want = Rational(binom) * [&] {
        Rational p = 1;
        for (int k = 0; k < n - j; ++k) p *= -b0;
        return p;
      }();
      CHECK(Gt[n][j] == want);
      binom = binom * j / (n - j + 1);
    }
  }

  // g = z + 1/z: G_n(g(z)) = z^n + z^-n
  auto joukowski = RL(Rational(1), {Rational(0), Rational(1)}).padded(2 * N);
  auto Gj = faber_G(joukowski, N);
  auto dense = dense_of_laurent(RL(Rational(1), {Rational(0), Rational(1)}));
  auto data = grunsky_single(joukowski, N);
  for (int n = 1; n <= N; ++n) {
    auto val = dense_poly_of(Gj[n], dense);
    for (int p = -n; p <= n; ++p) CHECK(val.at(p) == ((p == n || p == -n) ? 1 : 0));
    for (int m = 1; m <= N; ++m) {
      Rational want = m == n ? Rational(1, n) : Rational(0);
      want.canonicalize();
      CHECK((*data.d)(n, m) == want);
    }
  }
}

TEST_CASE("Faber polynomial F_1 of Koebe") {
  auto F = faber_F(koebe<Rational>(7), 3);
  CHECK(F[1][0] == 2);
  CHECK(F[1][1] == 1);
}

TEST_CASE("property: Faber-Grunsky identities on random polynomial pairs") {
  std::mt19937_64 rng(24);
  for (int trial = 0; trial < 4; ++trial) {
    int N = 5;
    auto f = random_poly_f(rng, 3, 2 * N + 1);
    auto g = random_poly_g(rng, 2, 2 * N - 1);
    auto res = faber_grunsky_identities(f, g, N);
    CHECK(res.max() == 0.0);

    // Independent dense evaluation of G_n(g) for the finite Laurent polynomial g.
    auto data = grunsky_pair(f, g, N);
    auto G = faber_G(g, N);
    std::vector<Rational> tail(g.coeffs().begin(), g.coeffs().begin() + 3);
    auto dense = dense_of_laurent(RL(Rational(1), tail));
    for (int n = 1; n <= N; ++n) {
      auto val = dense_poly_of(G[n], dense);
      CHECK(val.at(n) == 1);
      for (int p = 0; p < n; ++p) CHECK(val.at(p) == 0);
      for (int m = 1; m <= N; ++m) CHECK(val.at(-m) == Rational(n) * (*data.d)(n, m));
    }
  }
  std::mt19937_64 rng2(25);
  int N = 6;
  auto f = random_normalized_complex(rng2, 2 * N + 1, 0.15);
  std::vector<Complex> tail;
  for (int k = 0; k <= 2 * N - 1; ++k) tail.push_back(random_complex(rng2, 0.15));
  auto res = faber_grunsky_identities(f, TruncatedLaurentInf<Complex>(Complex(1), tail), N);
  CHECK(res.max() < 1e-10);
}

TEST_CASE("Yur'ev-Krichever vectors") {
  int N = 5;
  auto id = yk_embedding(RT::identity(2 * N + 1), N);
  for (int n = 1; n <= N; ++n)
    for (int k = -n; k <= N; ++k) CHECK(id.by_composition[n].at(k) == (k == -n ? 1 : 0));

  auto kb = yk_embedding(koebe<Rational>(2 * N + 1), N);
  CHECK(kb.consistency == 0.0);
  for (int n = 1; n <= N; ++n)
    for (int k = -n; k <= N; ++k) {
      int want = (k == -n || k == n) ? 1 : 0;
      CHECK(kb.by_composition[n].at(k) == want);
      CHECK(kb.by_grunsky[n].at(k) == want);
    }

  std::mt19937_64 rng(26);
  auto fc = random_normalized_complex(rng, 2 * N + 1, 0.25);
  CHECK(yk_embedding(fc, N).consistency < 1e-12);
}

TEST_CASE("residue operator") {
  int N = 4;
  Bi zero(N, Sector::PlusPlus);
  std::vector<Rational> h{1, 2, 3, 4, 5};
  for (auto& v : residue_operator(zero, h, Domain::HPlus)) CHECK(v == 0);

  Bi mono(N, Sector::PlusPlus);
  mono(2, 3) = 1;
  std::vector<Rational> e3(N + 1, Rational(0));
  e3[3] = 1;
  auto out = residue_operator(mono, e3, Domain::HPlus);
  for (int i = 0; i <= N; ++i) CHECK(out[i] == (i == 2 ? 1 : 0));

  auto data = grunsky_single(koebe<Rational>(2 * N + 1), N);
  auto yk = yk_embedding(koebe<Rational>(2 * N + 1), N);
  for (int n = 1; n <= N; ++n) {
    std::vector<Rational> en(N + 1, Rational(0));
    en[n] = 1;
    auto row = residue_operator(*data.c, en, Domain::HPlus);
    for (int m = 1; m <= N; ++m) CHECK(Rational(n) * row[m] == yk.by_grunsky[n].at(m));
  }

  try {
    residue_operator(*data.c, h, Domain::HMinus);
    FAIL("sector mismatch expected");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::SectorMismatch);
  }
}

namespace {

double power_iteration(const Eigen::MatrixXcd& A) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Ones(A.cols());
  double lambda = 0;
  for (int it = 0; it < 2000; ++it) {
    Eigen::VectorXcd w = A * v;
    lambda = w.norm() / v.norm();
    v = w / w.norm();
  }
  return lambda;
}

} // namespace

TEST_CASE("Siegel disc checks") {
  int N = 8;
  auto id = siegel_check(yk_embedding(TruncatedTaylor<Complex>::identity(2 * N + 1), N).point);
  CHECK(id.symmetric);
  CHECK(id.spectral_gap == doctest::Approx(1.0));
  CHECK(id.kahler_potential == doctest::Approx(0.0));

  auto f = TruncatedTaylor<Complex>::identity(2 * N + 1);
  f[2] = 0.1;
  auto point = yk_embedding(f, N).point;
  auto rep = siegel_check(point);
  CHECK(rep.symmetric);
  CHECK(rep.spectral_gap > 0.0);
  CHECK(rep.spectral_gap < 1.0);
  CHECK(rep.kahler_potential > 0.0);
  Eigen::MatrixXcd gram = point.Z.adjoint() * point.Z;
  CHECK(rep.spectral_gap == doctest::Approx(1.0 - power_iteration(gram)).epsilon(1e-9));
  // -tr log(1 - A) = sum tr(A^k)/k
  double series = 0;
  Eigen::MatrixXcd power = gram;
  for (int k = 1; k < 200; ++k) {
    series += power.trace().real() / k;
    power = power * gram;
  }
  CHECK(rep.kahler_potential == doctest::Approx(series).epsilon(1e-10));

  // Koebe: Z is the identity at every truncation, so the gap is exactly 0.
  for (int n : {2, 4, 8}) {
    auto kp = yk_embedding(koebe<Complex>(2 * n + 1), n).point;
    CHECK(std::abs(siegel_gap(kp)) < 1e-12);
    try {
      siegel_check(kp);
      FAIL("Koebe lies on the boundary of the disc");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::NotInDisc);
    }
  }
}
