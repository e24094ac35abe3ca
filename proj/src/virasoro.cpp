#include "loewner/virasoro.hpp"

#include <algorithm>
#include <map>

namespace loewner {

namespace {

const Complex kI{0.0, 1.0};

// Complex Fourier coefficients V_{-M..M} (index k + M) of re + i im.
std::vector<Complex> complex_coefficients(const FourierField& re, const FourierField& im, int& M) {
  M = std::max(re.modes(), im.modes());
  std::vector<Complex> V(static_cast<std::size_t>(2 * M + 1));
  auto accumulate = [&](const FourierField& x, Complex scale) {
    V[M] += scale * x.a[0];
    for (int k = 1; k <= x.modes(); ++k) {
      V[M + k] += scale * Complex(x.a[k], -x.b[k]) / 2.0;
      V[M - k] += scale * Complex(x.a[k], x.b[k]) / 2.0;
    }
  };
  accumulate(re, 1.0);
  accumulate(im, kI);
  return V;
}

CoeffPolynomial disc_coord(int index, int N) {
  if (index < 1 || index > N) return CoeffPolynomial(Chart::Disc);
  return CoeffPolynomial::coordinate(Chart::Disc, index);
}

CoeffPolynomial disc_const(const Rational& v) { return CoeffPolynomial::constant(Chart::Disc, v); }

// Reduced row echelon form in place; returns pivot columns.
std::vector<int> rref(std::vector<std::vector<Rational>>& m, int cols) {
  std::vector<int> pivots;
  int row = 0;
  int rows = static_cast<int>(m.size());
  for (int col = 0; col < cols && row < rows; ++col) {
    int sel = -1;
    for (int r = row; r < rows; ++r)
      if (sgn(m[r][col]) != 0) {
        sel = r;
        break;
      }
    if (sel < 0) continue;
    std::swap(m[row], m[sel]);
    Rational inv = 1 / m[row][col];
    for (int c = col; c < cols; ++c) m[row][c] *= inv;
    for (int r = 0; r < rows; ++r) {
      if (r == row || sgn(m[r][col]) == 0) continue;
      Rational factor = m[r][col];
      for (int c = col; c < cols; ++c) m[r][c] -= factor * m[row][c];
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

} // namespace

TruncatedTaylor<Complex> lie_field(const FourierField& re, const FourierField& im, const TruncatedTaylor<Complex>& f) {
  int M = 0;
  auto V = complex_coefficients(re, im, M);
  int N = f.order();
  auto H = TruncatedTaylor<Complex>::zero(N);
  H[0] = V[M];
  for (int n = 1; n <= std::min(M, N); ++n) H[n] = 2.0 * V[M + n];
  auto zf = TruncatedTaylor<Complex>::zero(N);
  auto d = derivative(f);
  for (int j = 0; j + 1 <= N; ++j) zf[j + 1] = d[j];
  return Complex(-1.0) * mul(zf, H);
}

TruncatedTaylor<Complex> lie_field(const FourierField& v, const TruncatedTaylor<Complex>& f) {
  return lie_field(v, FourierField(), f);
}

std::pair<FourierField, FourierField> witt_basis_field(int k) {
  // -i e^{ikt} = sin kt - i cos kt
  if (k == 0) return {FourierField(), FourierField::cosine(0, -1.0)};
  int m = std::abs(k);
  double sign = k > 0 ? 1.0 : -1.0;
  return {FourierField::sine(m, sign), FourierField::cosine(m, -1.0)};
}

LinearCoeffOperator witt_op(int k, int N) {
  if (k < 1) fail(ErrorKind::UnsupportedLevel, "witt_op needs k >= 1");
  LinearCoeffOperator op(Chart::Disc, N);
  op.add_term(disc_const(1), {k - 1});
  for (int n = 1; n + k <= N; ++n) op.add_term(Rational(n + 1) * disc_coord(n, N), {n + k - 1});
  return op;
}

CoeffPolynomial reciprocal_coordinate(int k, int N) {
  // 1/f = sum_j r_j z^{j-1}, r_0 = 1, r_j = -sum_{i=1}^{j} c_i r_{j-i}
  int top = k + 2;
  std::vector<CoeffPolynomial> r;
  r.push_back(disc_const(1));
  for (int j = 1; j <= top; ++j) {
    CoeffPolynomial acc(Chart::Disc);
    for (int i = 1; i <= j; ++i) acc -= disc_coord(i, N) * r[j - i];
    r.push_back(acc);
  }
  return r[top];
}

LinearCoeffOperator virasoro_op(int n, const VirasoroParams& p, int N) {
  if (n < -2) fail(ErrorKind::UnsupportedLevel, "no coordinate form for L_n with n < -2");
  if (n >= 1) return witt_op(n, N);
  LinearCoeffOperator op(Chart::Disc, N);
  auto c1 = disc_coord(1, N), c2 = disc_coord(2, N);
  if (n == 0) {
    op.add_term(disc_const(p.h));
    for (int k = 1; k <= N; ++k) op.add_term(Rational(k) * disc_coord(k, N), {k - 1});
    return op;
  }
  if (n == -1) {
    for (int k = 1; k <= N; ++k)
      op.add_term(Rational(k + 2) * disc_coord(k + 1, N) - Rational(2) * c1 * disc_coord(k, N), {k - 1});
    op.add_term(Rational(2) * p.h * c1);
    return op;
  }
  auto q = Rational(4) * c2 - c1 * c1;
  for (int k = 1; k <= N; ++k)
    op.add_term(Rational(k + 3) * disc_coord(k + 2, N) - q * disc_coord(k, N) - reciprocal_coordinate(k, N), {k - 1});
  op.add_term(p.h * q + (p.c / 2) * (c2 - c1 * c1));
  return op;
}

OperatorAction commutator(const LinearCoeffOperator& A, const LinearCoeffOperator& B, int max_weight) {
  return operator_commutator(B, A, max_weight);
}

OperatorAction operator_commutator(const LinearCoeffOperator& A, const LinearCoeffOperator& B, int max_weight) {
  if (A.chart() != B.chart()) fail(ErrorKind::ChartMismatch, "commutator of operators on different charts");
  OperatorAction out;
  out.basis = monomial_basis(std::max(A.variables(), B.variables()), max_weight);
  for (const auto& e : out.basis) {
    auto m = CoeffPolynomial::monomial(A.chart(), e);
    out.images.push_back(A.apply(B.apply(m)) - B.apply(A.apply(m)));
  }
  return out;
}

LinearCoeffOperator vector_field_bracket(const LinearCoeffOperator& X, const LinearCoeffOperator& Y) {
  if (X.chart() != Y.chart()) fail(ErrorKind::ChartMismatch, "bracket of fields on different charts");
  if (!X.is_first_order() || !Y.is_first_order())
    fail(ErrorKind::ConfigInvalid, "vector-field bracket needs first-order operators");
  int vars = std::max(X.variables(), Y.variables());
  // Collect coefficient of each slot; slot -1 holds the zero-order part.
  auto collect = [&](const LinearCoeffOperator& op) {
    std::map<int, CoeffPolynomial> c;
    for (const auto& t : op.terms()) {
      int s = t.slots.empty() ? -1 : t.slots[0];
      auto it = c.try_emplace(s, CoeffPolynomial(op.chart())).first;
      it->second += t.coeff;
    }
    return c;
  };
  auto xc = collect(X), yc = collect(Y);
  auto applied = [&](const LinearCoeffOperator& op, const std::map<int, CoeffPolynomial>& coeffs, int s) {
    auto it = coeffs.find(s);
    return it == coeffs.end() ? CoeffPolynomial(op.chart()) : op.apply(it->second);
  };
  // Derivative parts of op.apply act on coefficients; zero-order parts of
  // X multiply, and those cancel in the commutator.
  auto first_order_part = [&](const LinearCoeffOperator& op) {
    LinearCoeffOperator d(op.chart(), op.variables());
    for (const auto& t : op.terms())
      if (!t.slots.empty()) d.add_term(t.coeff, t.slots);
    return d;
  };
  auto Xd = first_order_part(X), Yd = first_order_part(Y);
  LinearCoeffOperator out(X.chart(), vars);
  for (int s = -1; s < vars; ++s) {
    auto c = applied(Xd, yc, s) - applied(Yd, xc, s);
    if (!c.is_zero()) {
      if (s < 0)
        out.add_term(c);
      else
        out.add_term(c, {s});
    }
  }
  return out;
}

Complex neretin_cocycle_symbol(const TruncatedTaylor<Complex>& f, const LaurentPoly<Complex>& symbol,
                               const CentralParams& p, double tau) {
  if (!is_zero(f[0])) fail(ErrorKind::NonzeroConstantTerm, "Neretin cocycle expects f(0) = 0");
  if (f.order() < 1 || is_zero(f[1])) fail(ErrorKind::ZeroLeadingCoefficient, "Neretin cocycle needs f'(0) != 0");
  int M = std::max(0, -symbol.low);
  bool needs_schwarzian = p.c != 0.0;
  int need = std::max(M + 1, needs_schwarzian ? 3 : 1);
  if (f.order() < need) fail(ErrorKind::InsufficientOrder, "f is too short for the symbol's negative modes");
  int N = f.order();
  auto fz = TruncatedTaylor<Complex>::zero(N - 1);
  for (int k = 0; k <= N - 1; ++k) fz[k] = f[k + 1];
  auto ratio = div(derivative(f), fz);
  auto Q = mul(ratio, ratio);
  Complex first{};
  for (int j = symbol.low; j <= std::min(0, symbol.high()); ++j) first += symbol.at(j) * Q[-j];
  Complex second{};
  if (needs_schwarzian) {
    auto S = schwarzian(f);
    for (int j = symbol.low; j <= std::min(-2, symbol.high()); ++j) second += symbol.at(j) * S[-2 - j];
  }
  return p.h * first + (p.c / 12.0) * second + kI * tau * p.c;
}

Complex neretin_cocycle(const TruncatedTaylor<Complex>& f, const FourierField& re, const FourierField& im,
                        const CentralParams& p, double tau) {
  int M = 0;
  auto V = complex_coefficients(re, im, M);
  LaurentPoly<Complex> symbol;
  symbol.low = -M;
  for (auto& v : V) symbol.c.push_back(kI * v);
  return neretin_cocycle_symbol(f, symbol, p, tau);
}

Rational dual_pairing(const CoeffPolynomial& P, const CoeffPolynomial& Q) {
  if (!P.is_zero() && !Q.is_zero() && P.chart() != Q.chart())
    fail(ErrorKind::ChartMismatch, "pairing of polynomials on different charts");
  Rational acc = 0;
  for (const auto& [e, pc] : P.terms()) {
    Rational qc = Q.coefficient(e);
    if (sgn(qc) == 0) continue;
    mpz_class weight = 1;
    for (int x : e)
      for (int k = 2; k <= x; ++k) weight *= k;
    acc += pc * qc * Rational(weight);
  }
  return acc;
}

std::vector<CoeffPolynomial> kernel_solve(const LinearCoeffOperator& A, int max_weight) {
  auto action = action_on_basis(A, max_weight);
  std::map<Exponents, int> row_of;
  for (const auto& img : action.images)
    for (const auto& [e, _] : img.terms()) row_of.try_emplace(e, 0);
  int r = 0;
  for (auto& [_, idx] : row_of) idx = r++;
  int cols = static_cast<int>(action.basis.size());
  std::vector<std::vector<Rational>> m(static_cast<std::size_t>(r), std::vector<Rational>(cols, Rational(0)));
  for (int j = 0; j < cols; ++j)
    for (const auto& [e, c] : action.images[j].terms()) m[row_of[e]][j] = c;
  auto pivots = rref(m, cols);
  std::vector<bool> is_pivot(cols, false);
  for (int pc : pivots) is_pivot[pc] = true;
  std::vector<CoeffPolynomial> basis;
  for (int free = 0; free < cols; ++free) {
    if (is_pivot[free]) continue;
    CoeffPolynomial v = CoeffPolynomial::monomial(A.chart(), action.basis[free]);
    for (std::size_t i = 0; i < pivots.size(); ++i)
      if (sgn(m[i][free]) != 0) v.add_term(action.basis[pivots[i]], -m[i][free]);
    basis.push_back(v);
  }
  return basis;
}

int bracket_rank(const std::vector<LinearCoeffOperator>& fields, int depth, const std::vector<Rational>& point) {
  if (fields.empty()) return 0;
  std::vector<LinearCoeffOperator> all = fields, frontier = fields;
  for (int d = 1; d <= depth; ++d) {
    std::vector<LinearCoeffOperator> next;
    for (const auto& X : fields)
      for (const auto& Y : frontier) next.push_back(vector_field_bracket(X, Y));
    for (const auto& n : next) all.push_back(n);
    frontier = std::move(next);
  }
  int vars = 0;
  for (const auto& op : all) vars = std::max(vars, op.variables());
  std::vector<std::vector<Rational>> m;
  for (const auto& op : all) {
    std::vector<Rational> row(vars, Rational(0));
    for (const auto& t : op.terms())
      if (t.slots.size() == 1) row[t.slots[0]] += t.coeff.evaluate(point);
    m.push_back(row);
  }
  return static_cast<int>(rref(m, vars).size());
}

} // namespace loewner
