#pragma once

// Witt and Virasoro generators acting on coordinate polynomials, the Lie
// fields they come from, the Neretin cocycle, the dual pairing and exact
// kernels of graded operators.

#include <vector>

#include "loewner/circle.hpp"
#include "loewner/coeff_poly.hpp"
#include "loewner/series.hpp"

namespace loewner {

struct VirasoroParams {
  Rational c = 0;
  Rational h = 0;
};

// -z f'(z) (1/2pi) int (e^{it}+z)/(e^{it}-z) v(t) dt for v = re + i im,
// using cos nt -> z^n, sin nt -> -i z^n and 1 -> 1.
TruncatedTaylor<Complex> lie_field(const FourierField& re, const FourierField& im, const TruncatedTaylor<Complex>& f);
TruncatedTaylor<Complex> lie_field(const FourierField& v, const TruncatedTaylor<Complex>& f);

// The field v_k = -i e^{ikt} as (real part, imaginary part).
std::pair<FourierField, FourierField> witt_basis_field(int k);

// z^{k+1} f'(z), truncated to the order of f. Equals lie_field(v_k) / (2i)
// for k >= 1 and lie_field(v_0) / i, since the constant mode is not doubled.
template <class T>
TruncatedTaylor<T> witt_lie_field(int k, const TruncatedTaylor<T>& f) {
  auto d = derivative(f);
  auto out = TruncatedTaylor<T>::zero(f.order());
  for (int j = 0; j <= d.order() && j + k + 1 <= f.order(); ++j) out[j + k + 1] = d[j];
  return out;
}

// L_k = d_k + sum_n (n+1) c_n d_{n+k} on c_1..c_N, k >= 1.
LinearCoeffOperator witt_op(int k, int N);

// L_n for n >= -2 in the disc chart. Positive levels coincide with witt_op.
// Raises UnsupportedLevel for n < -2.
LinearCoeffOperator virasoro_op(int n, const VirasoroParams& p, int N);

// The coordinate polynomials a_k = [z^{k+1}] (1/f) of the generic f = z + sum c_n z^{n+1}.
CoeffPolynomial reciprocal_coordinate(int k, int N);

// Action of B o A - A o B on the monomials of weight <= W. This is the
// matrix product M_A M_B - M_B M_A when operators act on row vectors,
// and gives [L_m, L_n] = (n - m) L_{m+n} for the generators above.
OperatorAction commutator(const LinearCoeffOperator& A, const LinearCoeffOperator& B, int max_weight);

// Action of A o B - B o A.
OperatorAction operator_commutator(const LinearCoeffOperator& A, const LinearCoeffOperator& B, int max_weight);

// Bracket of first-order operators as vector fields, [X, Y] = X o Y - Y o X.
LinearCoeffOperator vector_field_bracket(const LinearCoeffOperator& X, const LinearCoeffOperator& Y);

// Neretin's Psi(f, v + tau c) with the vector field v d/dt given by its
// Laurent symbol sigma(w) = i v(w), w = e^{it}; contour integrals against
// dw/w are normalized constant terms.
Complex neretin_cocycle_symbol(const TruncatedTaylor<Complex>& f, const LaurentPoly<Complex>& symbol,
                               const CentralParams& p, double tau);
Complex neretin_cocycle(const TruncatedTaylor<Complex>& f, const FourierField& re, const FourierField& im,
                        const CentralParams& p, double tau);

// <P, Q> = P(d) Q(x) at x = 0.
Rational dual_pairing(const CoeffPolynomial& P, const CoeffPolynomial& Q);

// Basis of {P : A P = 0, weight(P) <= W}; one vector per free monomial of
// the reduced row echelon form, free coefficient 1.
std::vector<CoeffPolynomial> kernel_solve(const LinearCoeffOperator& A, int max_weight);

// Rank of the family of first-order fields, evaluated at a point of the
// infinity chart, after bracketing up to the given depth.
int bracket_rank(const std::vector<LinearCoeffOperator>& fields, int depth, const std::vector<Rational>& point);

} // namespace loewner
