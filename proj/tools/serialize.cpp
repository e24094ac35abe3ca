#include "serialize.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace loewner::cli {

Json number(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return "nan";
  return x > 0 ? "inf" : "-inf";
}

Json complex_json(Complex z) { return Json::array({number(z.real()), number(z.imag())}); }

std::string csv_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

template <>
Rational parse_scalar<Rational>(const Json& v, const std::string& field) {
  try {
    if (v.is_number_integer()) return Rational(v.get<long>());
    if (v.is_number_float()) return parse_rational(v.dump());
    if (v.is_string()) return parse_rational(v.get<std::string>());
    if (v.is_array() && v.size() == 2) {
      Rational im = parse_scalar<Rational>(v[1], field);
      if (sgn(im) != 0) config_error(field, "rational arithmetic needs real coefficients");
      return parse_scalar<Rational>(v[0], field);
    }
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::ConfigInvalid && std::string(e.what()).find("field '") != std::string::npos) throw;
    config_error(field, e.what());
  }
  config_error(field, "coefficient must be an integer, a rational string, a number or [re, im]");
}

namespace {

double real_part(const Json& v, const std::string& field) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    try {
      return parse_rational(v.get<std::string>()).get_d();
    } catch (const Error& e) {
      config_error(field, e.what());
    }
  }
  config_error(field, "coefficient must be a number, a rational string or [re, im]");
}

} // namespace

template <>
Complex parse_scalar<Complex>(const Json& v, const std::string& field) {
  if (v.is_array() && v.size() == 2) return {real_part(v[0], field), real_part(v[1], field)};
  return {real_part(v, field), 0.0};
}

namespace {

template <class T>
std::vector<T> coefficient_list(const Json& v, const std::string& field, std::size_t min_size) {
  if (!v.contains("coeffs") || !v["coeffs"].is_array()) config_error(field, "needs a \"coeffs\" array");
  std::vector<T> out;
  for (std::size_t i = 0; i < v["coeffs"].size(); ++i)
    out.push_back(parse_scalar<T>(v["coeffs"][i], field + ".coeffs[" + std::to_string(i) + "]"));
  if (out.size() < min_size) config_error(field, "needs at least " + std::to_string(min_size) + " coefficients");
  return out;
}

int shorthand_order(const Json& v, const std::string& key, const std::string& field) {
  if (!v[key].is_number_integer() || v[key].get<long>() < 1 || v[key].get<long>() > 4096)
    config_error(field + "." + key, "must be an integer order in [1, 4096]");
  return v[key].get<int>();
}

} // namespace

template <class T>
TruncatedTaylor<T> parse_taylor(const Json& v, const std::string& field) {
  if (!v.is_object()) config_error(field, "series must be a JSON object");
  if (v.contains("koebe")) return koebe<T>(shorthand_order(v, "koebe", field));
  if (v.contains("identity")) return TruncatedTaylor<T>::identity(shorthand_order(v, "identity", field));
  if (v.value("kind", std::string("taylor")) != "taylor") config_error(field, "expected kind \"taylor\"");
  return TruncatedTaylor<T>(coefficient_list<T>(v, field, 1));
}

template <class T>
TruncatedLaurentInf<T> parse_laurent(const Json& v, const std::string& field) {
  if (!v.is_object()) config_error(field, "series must be a JSON object");
  if (v.contains("identity")) return TruncatedLaurentInf<T>::identity(shorthand_order(v, "identity", field));
  if (v.value("kind", std::string()) != "laurent_inf") config_error(field, "expected kind \"laurent_inf\"");
  auto c = coefficient_list<T>(v, field, 2);
  T lead = c.front();
  return TruncatedLaurentInf<T>(lead, std::vector<T>(c.begin() + 1, c.end()));
}

template <class T>
Json scalar_json(const T& x) {
  return complex_json(ScalarTraits<T>::to_complex(x));
}

namespace {

template <class T>
void add_exact(Json& out, const std::vector<T>& values) {
  if constexpr (ScalarTraits<T>::exact) {
    Json exact = Json::array();
    for (const auto& x : values) exact.push_back(x.get_str());
    out["exact"] = exact;
  }
}

} // namespace

template <class T>
Json series_json(const TruncatedTaylor<T>& f) {
  Json coeffs = Json::array();
  std::vector<T> values(f.coeffs().begin(), f.coeffs().end());
  for (const auto& x : values) coeffs.push_back(scalar_json(x));
  Json out{{"kind", "taylor"}, {"order", f.order()}, {"coeffs", coeffs}};
  add_exact(out, values);
  return out;
}

template <class T>
Json series_json(const TruncatedLaurentInf<T>& g) {
  std::vector<T> values{g.lead()};
  values.insert(values.end(), g.coeffs().begin(), g.coeffs().end());
  Json coeffs = Json::array();
  for (const auto& x : values) coeffs.push_back(scalar_json(x));
  Json out{{"kind", "laurent_inf"}, {"order", g.order()}, {"coeffs", coeffs}};
  add_exact(out, values);
  return out;
}

template <class T>
Json laurent_poly_json(const LaurentPoly<T>& p) {
  Json coeffs = Json::array();
  for (const auto& x : p.c) coeffs.push_back(scalar_json(x));
  Json out{{"low", p.low}, {"high", p.high()}, {"coeffs", coeffs}};
  add_exact(out, p.c);
  return out;
}

template <class T>
Json matrix_json(const BivariateTruncated<T>& m, const std::string& block) {
  Json entries = Json::array();
  std::vector<T> values;
  for (int i = 0; i <= m.degree(); ++i)
    for (int j = 0; j <= m.degree(); ++j) {
      entries.push_back(scalar_json(m(i, j)));
      values.push_back(m(i, j));
    }
  Json out{{"N", m.degree()}, {"block", block}, {"entries", entries}};
  add_exact(out, values);
  return out;
}

template <class T>
std::string matrix_csv(const BivariateTruncated<T>& m) {
  std::ostringstream out;
  for (int j = 0; j <= m.degree(); ++j) out << (j ? "," : "") << "re" << j << ",im" << j;
  out << "\n";
  for (int i = 0; i <= m.degree(); ++i) {
    for (int j = 0; j <= m.degree(); ++j) {
      Complex z = ScalarTraits<T>::to_complex(m(i, j));
      out << (j ? "," : "") << csv_number(z.real()) << "," << csv_number(z.imag());
    }
    out << "\n";
  }
  return out.str();
}

template TruncatedTaylor<Rational> parse_taylor<Rational>(const Json&, const std::string&);
template TruncatedTaylor<Complex> parse_taylor<Complex>(const Json&, const std::string&);
template TruncatedLaurentInf<Rational> parse_laurent<Rational>(const Json&, const std::string&);
template TruncatedLaurentInf<Complex> parse_laurent<Complex>(const Json&, const std::string&);
template Json series_json<Rational>(const TruncatedTaylor<Rational>&);
template Json series_json<Complex>(const TruncatedTaylor<Complex>&);
template Json series_json<Rational>(const TruncatedLaurentInf<Rational>&);
template Json series_json<Complex>(const TruncatedLaurentInf<Complex>&);
template Json laurent_poly_json<Rational>(const LaurentPoly<Rational>&);
template Json laurent_poly_json<Complex>(const LaurentPoly<Complex>&);
template Json scalar_json<Rational>(const Rational&);
template Json scalar_json<Complex>(const Complex&);
template Json matrix_json<Rational>(const BivariateTruncated<Rational>&, const std::string&);
template Json matrix_json<Complex>(const BivariateTruncated<Complex>&, const std::string&);
template std::string matrix_csv<Rational>(const BivariateTruncated<Rational>&);
template std::string matrix_csv<Complex>(const BivariateTruncated<Complex>&);

FourierField parse_fourier(const Json& v, const std::string& field) {
  if (!v.is_object() || !v.contains("a") || !v["a"].is_array())
    config_error(field, "Fourier field must be {\"a\": [...], \"b\": [...]}");
  std::vector<double> a, b;
  for (const auto& x : v["a"]) {
    if (!x.is_number()) config_error(field + ".a", "entries must be numbers");
    a.push_back(x.get<double>());
  }
  if (v.contains("b")) {
    if (!v["b"].is_array()) config_error(field + ".b", "must be an array");
    for (const auto& x : v["b"]) {
      if (!x.is_number()) config_error(field + ".b", "entries must be numbers");
      b.push_back(x.get<double>());
    }
  }
  if (a.empty()) a.push_back(0.0);
  std::size_t n = std::max(a.size(), b.size());
  a.resize(n, 0.0);
  b.resize(n, 0.0);
  try {
    return FourierField(a, b);
  } catch (const Error& e) {
    config_error(field, e.what());
  }
}

Json fourier_json(const FourierField& v) {
  Json a = Json::array(), b = Json::array();
  for (double x : v.a) a.push_back(number(x));
  for (double x : v.b) b.push_back(number(x));
  return {{"a", a}, {"b", b}};
}

Json coeff_poly_json(const CoeffPolynomial& P) {
  Json out = Json::array();
  for (const auto& [e, c] : P.terms()) {
    Json mono = Json::object();
    for (std::size_t s = 0; s < e.size(); ++s)
      if (e[s] != 0) mono[CoeffPolynomial::variable_name(P.chart(), static_cast<int>(s))] = e[s];
    out.push_back({{"monomial", mono}, {"coeff", c.get_str()}});
  }
  return out;
}

CoeffPolynomial parse_coeff_poly(const Json& v, Chart chart, const std::string& field) {
  if (!v.is_array()) config_error(field, "polynomial must be a list of {monomial, coeff} terms");
  CoeffPolynomial P(chart);
  for (std::size_t i = 0; i < v.size(); ++i) {
    std::string where = field + "[" + std::to_string(i) + "]";
    const Json& term = v[i];
    if (!term.is_object() || !term.contains("coeff")) config_error(where, "term needs \"coeff\"");
    Rational c = parse_scalar<Rational>(term["coeff"], where + ".coeff");
    Exponents e;
    if (term.contains("monomial")) {
      if (!term["monomial"].is_object()) config_error(where + ".monomial", "must map variable names to exponents");
      for (const auto& [name, power] : term["monomial"].items()) {
        int slot = -1;
        for (int s = 0; s < 64 && slot < 0; ++s)
          if (CoeffPolynomial::variable_name(chart, s) == name) slot = s;
        if (slot < 0) config_error(where + ".monomial", "unknown variable '" + name + "'");
        if (!power.is_number_integer() || power.get<int>() < 0)
          config_error(where + ".monomial." + name, "exponent must be a nonnegative integer");
        if (static_cast<int>(e.size()) <= slot) e.resize(static_cast<std::size_t>(slot) + 1, 0);
        e[static_cast<std::size_t>(slot)] += power.get<int>();
      }
    }
    P.add_term(e, c);
  }
  return P;
}

Json ensemble_json(const EnsembleOptions& o) {
  return {{"kappa", o.kappa},
          {"T", o.T},
          {"dt", o.dt},
          {"paths", o.paths},
          {"seed", o.seed},
          {"checkpoints", o.checkpoints},
          {"chunk", o.chunk},
          {"threads", o.threads},
          {"z_crit", o.z_crit},
          {"effect_size", o.effect_size},
          {"max_swallowed_fraction", o.max_swallowed_fraction},
          {"localization", o.localization}};
}

Json drift_report_json(const DriftReport& r) {
  Json t = Json::array(), m = Json::array(), se = Json::array(), z = Json::array();
  for (std::size_t i = 0; i < r.times.size(); ++i) {
    t.push_back(number(r.times[i]));
    m.push_back(number(r.mean[i]));
    se.push_back(number(r.se[i]));
    z.push_back(number(r.z[i]));
  }
  return {{"observable", r.observable},
          {"times", t},
          {"mean", m},
          {"se", se},
          {"z", z},
          {"max_abs_z", number(r.max_abs_z)},
          {"verdict", to_string(r.verdict)},
          {"high_variance", r.high_variance},
          {"swallowed_fraction", number(r.swallowed_fraction)},
          {"localized_fraction", number(r.localized_fraction)},
          {"ensemble", ensemble_json(r.options)}};
}

std::string drift_csv(const std::vector<DriftReport>& reports) {
  std::ostringstream out;
  out << "observable,t,mean,se,z\n";
  for (const auto& r : reports)
    for (std::size_t i = 0; i < r.times.size(); ++i)
      out << '"' << r.observable << "\"," << csv_number(r.times[i]) << "," << csv_number(r.mean[i]) << ","
          << csv_number(r.se[i]) << "," << csv_number(r.z[i]) << "\n";
  return out.str();
}

} // namespace loewner::cli
