#pragma once

// Polynomials in affine coordinates and linear differential operators on them.
//
// Variables are addressed by slot s = 0, 1, 2, ...:
//   disc chart:     slot s is c_{s+1}, weight s+1
//   infinity chart: slot s is b_s,     weight s+1
// so the weight of a slot is s+1 in both charts.

#include <complex>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "loewner/error.hpp"
#include "loewner/scalar.hpp"

namespace loewner {

enum class Chart { Disc, Infinity };

const char* to_string(Chart chart);

// Exponent of each slot; trailing zeros are always trimmed.
using Exponents = std::vector<int>;

int weight_of(const Exponents& e);

class CoeffPolynomial {
public:
  explicit CoeffPolynomial(Chart chart = Chart::Disc) : chart_(chart) {}

  static CoeffPolynomial constant(Chart chart, const Rational& value);
  static CoeffPolynomial monomial(Chart chart, Exponents e, const Rational& coeff = Rational(1));
  // Coordinate c_index (disc, index >= 1) or b_index (infinity, index >= 0).
  static CoeffPolynomial coordinate(Chart chart, int index);
  static int slot_of(Chart chart, int index);
  static std::string variable_name(Chart chart, int slot);

  Chart chart() const { return chart_; }
  const std::map<Exponents, Rational>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  // Maximum term weight; 0 for the zero polynomial.
  int weight() const;
  // Highest slot that occurs, or -1.
  int max_slot() const;
  Rational coefficient(const Exponents& e) const;

  void add_term(Exponents e, const Rational& coeff);
  CoeffPolynomial derivative(int slot) const;
  Complex evaluate(const std::vector<Complex>& values_by_slot) const;
  Rational evaluate(const std::vector<Rational>& values_by_slot) const;
  std::string to_string() const;

  CoeffPolynomial& operator+=(const CoeffPolynomial& other);
  CoeffPolynomial& operator-=(const CoeffPolynomial& other);
  friend CoeffPolynomial operator+(CoeffPolynomial a, const CoeffPolynomial& b) { return a += b; }
  friend CoeffPolynomial operator-(CoeffPolynomial a, const CoeffPolynomial& b) { return a -= b; }
  friend CoeffPolynomial operator*(const CoeffPolynomial& a, const CoeffPolynomial& b);
  friend CoeffPolynomial operator*(const Rational& s, const CoeffPolynomial& a);
  friend bool operator==(const CoeffPolynomial& a, const CoeffPolynomial& b) {
    return a.chart_ == b.chart_ && a.terms_ == b.terms_;
  }

private:
  void require_same_chart(const CoeffPolynomial& other) const;

  Chart chart_;
  std::map<Exponents, Rational> terms_;
};

// One summand coeff(x) * d/dx_{s1} ... d/dx_{sk}, k <= 2.
struct OperatorTerm {
  CoeffPolynomial coeff;
  std::vector<int> slots;
};

class LinearCoeffOperator {
public:
  LinearCoeffOperator(Chart chart, int variables) : chart_(chart), variables_(variables) {}

  Chart chart() const { return chart_; }
  int variables() const { return variables_; }
  const std::vector<OperatorTerm>& terms() const { return terms_; }

  // Derivatives in slots >= variables() are dropped (they annihilate the truncated space).
  void add_term(const CoeffPolynomial& coeff, std::vector<int> slots = {});
  CoeffPolynomial apply(const CoeffPolynomial& p) const;
  bool is_first_order() const;

  LinearCoeffOperator& operator+=(const LinearCoeffOperator& other);
  friend LinearCoeffOperator operator+(LinearCoeffOperator a, const LinearCoeffOperator& b) { return a += b; }
  friend LinearCoeffOperator operator*(const Rational& s, const LinearCoeffOperator& a);
  friend LinearCoeffOperator operator-(const LinearCoeffOperator& a, const LinearCoeffOperator& b) {
    return a + Rational(-1) * b;
  }

private:
  Chart chart_;
  int variables_;
  std::vector<OperatorTerm> terms_;
};

// Monomials of weight <= W in slots 0..variables-1, ordered by weight and
// then by descending lexicographic exponent vector.
std::vector<Exponents> monomial_basis(int variables, int max_weight);

// Images of a basis under an operator, the finite representation used for
// commutators and kernels.
struct OperatorAction {
  std::vector<Exponents> basis;
  std::vector<CoeffPolynomial> images;

  friend bool operator==(const OperatorAction& a, const OperatorAction& b) {
    return a.basis == b.basis && a.images == b.images;
  }
};

OperatorAction action_on_basis(const LinearCoeffOperator& op, int max_weight);
OperatorAction operator-(const OperatorAction& a, const OperatorAction& b);
OperatorAction operator*(const Rational& s, const OperatorAction& a);

// Returns lambda if every image equals lambda times its basis element.
std::optional<Rational> scalar_multiple_of_identity(const OperatorAction& action);

} // namespace loewner
