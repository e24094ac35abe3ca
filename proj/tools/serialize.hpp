#pragma once

// JSON and CSV forms of the library's data types.

#include <string>
#include <vector>

#include "config.hpp"
#include "loewner/bivariate.hpp"
#include "loewner/circle.hpp"
#include "loewner/coeff_poly.hpp"
#include "loewner/martingale.hpp"
#include "loewner/series.hpp"
#include "loewner/sle.hpp"

namespace loewner::cli {

// Finite doubles as numbers; infinities and NaN as the strings "inf", "-inf", "nan".
Json number(double x);
Json complex_json(Complex z);
std::string csv_number(double x);

template <class T>
T parse_scalar(const Json& v, const std::string& field);
template <>
Rational parse_scalar<Rational>(const Json& v, const std::string& field);
template <>
Complex parse_scalar<Complex>(const Json& v, const std::string& field);

// {"kind": "taylor", "coeffs": [a_0, ..., a_N]} or {"koebe": N} / {"identity": N}.
template <class T>
TruncatedTaylor<T> parse_taylor(const Json& v, const std::string& field);
// {"kind": "laurent_inf", "coeffs": [lead, b_0, ..., b_M]} or {"identity": M}.
template <class T>
TruncatedLaurentInf<T> parse_laurent(const Json& v, const std::string& field);

template <class T>
Json series_json(const TruncatedTaylor<T>& f);
template <class T>
Json series_json(const TruncatedLaurentInf<T>& g);
template <class T>
Json laurent_poly_json(const LaurentPoly<T>& p);
template <class T>
Json scalar_json(const T& x);

// {"N": n, "block": name, "entries": [[re, im], ...]} row-major over 0..n.
template <class T>
Json matrix_json(const BivariateTruncated<T>& m, const std::string& block);
template <class T>
std::string matrix_csv(const BivariateTruncated<T>& m);

FourierField parse_fourier(const Json& v, const std::string& field);
Json fourier_json(const FourierField& v);

// [{"monomial": {"b0": 2, ...}, "coeff": "p/q"}, ...]
Json coeff_poly_json(const CoeffPolynomial& P);
CoeffPolynomial parse_coeff_poly(const Json& v, Chart chart, const std::string& field);

Json ensemble_json(const EnsembleOptions& o);
Json drift_report_json(const DriftReport& r);
std::string drift_csv(const std::vector<DriftReport>& reports);

} // namespace loewner::cli
