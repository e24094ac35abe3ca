#include "loewner/coeff_poly.hpp"

#include <algorithm>
#include <functional>

namespace loewner {

namespace {

void trim(Exponents& e) {
  while (!e.empty() && e.back() == 0) e.pop_back();
}

} // namespace

const char* to_string(Chart chart) { return chart == Chart::Disc ? "disc" : "infinity"; }

int weight_of(const Exponents& e) {
  int w = 0;
  for (std::size_t s = 0; s < e.size(); ++s) w += static_cast<int>(s + 1) * e[s];
  return w;
}

CoeffPolynomial CoeffPolynomial::constant(Chart chart, const Rational& value) {
  CoeffPolynomial p(chart);
  p.add_term({}, value);
  return p;
}

CoeffPolynomial CoeffPolynomial::monomial(Chart chart, Exponents e, const Rational& coeff) {
  CoeffPolynomial p(chart);
  p.add_term(std::move(e), coeff);
  return p;
}

int CoeffPolynomial::slot_of(Chart chart, int index) {
  int slot = chart == Chart::Disc ? index - 1 : index;
  if (slot < 0) fail(ErrorKind::ConfigInvalid, "coordinate index out of range for the chart");
  return slot;
}

CoeffPolynomial CoeffPolynomial::coordinate(Chart chart, int index) {
  Exponents e(static_cast<std::size_t>(slot_of(chart, index) + 1), 0);
  e.back() = 1;
  return monomial(chart, e);
}

std::string CoeffPolynomial::variable_name(Chart chart, int slot) {
  return chart == Chart::Disc ? "c" + std::to_string(slot + 1) : "b" + std::to_string(slot);
}

int CoeffPolynomial::weight() const {
  int w = 0;
  for (const auto& [e, _] : terms_) w = std::max(w, weight_of(e));
  return w;
}

int CoeffPolynomial::max_slot() const {
  int m = -1;
  for (const auto& [e, _] : terms_) m = std::max(m, static_cast<int>(e.size()) - 1);
  return m;
}

Rational CoeffPolynomial::coefficient(const Exponents& e) const {
  Exponents key = e;
  trim(key);
  auto it = terms_.find(key);
  return it == terms_.end() ? Rational(0) : it->second;
}

void CoeffPolynomial::add_term(Exponents e, const Rational& coeff) {
  if (sgn(coeff) == 0) return;
  trim(e);
  auto [it, inserted] = terms_.emplace(std::move(e), coeff);
  if (!inserted) {
    it->second += coeff;
    if (sgn(it->second) == 0) terms_.erase(it);
  }
}

CoeffPolynomial CoeffPolynomial::derivative(int slot) const {
  CoeffPolynomial d(chart_);
  for (const auto& [e, coeff] : terms_) {
    if (slot >= static_cast<int>(e.size()) || e[slot] == 0) continue;
    Exponents f = e;
    int power = f[slot]--;
    d.add_term(std::move(f), coeff * power);
  }
  return d;
}

Complex CoeffPolynomial::evaluate(const std::vector<Complex>& values) const {
  Complex acc{};
  for (const auto& [e, coeff] : terms_) {
    Complex term = coeff.get_d();
    for (std::size_t s = 0; s < e.size(); ++s) {
      if (e[s] == 0) continue;
      Complex x = s < values.size() ? values[s] : Complex{};
      for (int k = 0; k < e[s]; ++k) term *= x;
    }
    acc += term;
  }
  return acc;
}

Rational CoeffPolynomial::evaluate(const std::vector<Rational>& values) const {
  Rational acc = 0;
  for (const auto& [e, coeff] : terms_) {
    Rational term = coeff;
    for (std::size_t s = 0; s < e.size(); ++s) {
      if (e[s] == 0) continue;
      Rational x = s < values.size() ? values[s] : Rational(0);
      for (int k = 0; k < e[s]; ++k) term *= x;
    }
    acc += term;
  }
  return acc;
}

std::string CoeffPolynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  // Highest weight first for readability.
  std::vector<std::pair<Exponents, Rational>> sorted(terms_.begin(), terms_.end());
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const auto& a, const auto& b) { return weight_of(a.first) > weight_of(b.first); });
  for (const auto& [e, coeff] : sorted) {
    Rational mag = abs(coeff);
    out += out.empty() ? (sgn(coeff) < 0 ? "-" : "") : (sgn(coeff) < 0 ? " - " : " + ");
    std::string mono;
    for (std::size_t s = 0; s < e.size(); ++s) {
      if (e[s] == 0) continue;
      if (!mono.empty()) mono += "*";
      mono += variable_name(chart_, static_cast<int>(s));
      if (e[s] > 1) mono += "^" + std::to_string(e[s]);
    }
    if (mono.empty()) {
      out += mag.get_str();
    } else if (mag == 1) {
      out += mono;
    } else {
      out += mag.get_str() + "*" + mono;
    }
  }
  return out;
}

void CoeffPolynomial::require_same_chart(const CoeffPolynomial& other) const {
  if (chart_ != other.chart_) fail(ErrorKind::ChartMismatch, "polynomials live on different charts");
}

CoeffPolynomial& CoeffPolynomial::operator+=(const CoeffPolynomial& other) {
  if (other.is_zero()) return *this;
  if (!is_zero()) require_same_chart(other);
  chart_ = other.chart_;
  for (const auto& [e, c] : other.terms_) add_term(e, c);
  return *this;
}

CoeffPolynomial& CoeffPolynomial::operator-=(const CoeffPolynomial& other) {
  if (other.is_zero()) return *this;
  if (!is_zero()) require_same_chart(other);
  chart_ = other.chart_;
  for (const auto& [e, c] : other.terms_) add_term(e, -c);
  return *this;
}

CoeffPolynomial operator*(const CoeffPolynomial& a, const CoeffPolynomial& b) {
  if (!a.is_zero() && !b.is_zero()) a.require_same_chart(b);
  CoeffPolynomial r(a.is_zero() ? b.chart_ : a.chart_);
  for (const auto& [ea, ca] : a.terms_)
    for (const auto& [eb, cb] : b.terms_) {
      Exponents e(std::max(ea.size(), eb.size()), 0);
      for (std::size_t s = 0; s < ea.size(); ++s) e[s] += ea[s];
      for (std::size_t s = 0; s < eb.size(); ++s) e[s] += eb[s];
      r.add_term(std::move(e), ca * cb);
    }
  return r;
}

CoeffPolynomial operator*(const Rational& s, const CoeffPolynomial& a) {
  CoeffPolynomial r(a.chart_);
  for (const auto& [e, c] : a.terms_) r.add_term(e, s * c);
  return r;
}

// ------------------------------------------------------------------ operators

void LinearCoeffOperator::add_term(const CoeffPolynomial& coeff, std::vector<int> slots) {
  if (slots.size() > 2) fail(ErrorKind::ConfigInvalid, "operator terms are at most second order");
  if (coeff.is_zero()) return;
  if (coeff.chart() != chart_) fail(ErrorKind::ChartMismatch, "operator coefficient on a different chart");
  for (int s : slots)
    if (s < 0 || s >= variables_) return;
  std::sort(slots.begin(), slots.end());
  terms_.push_back(OperatorTerm{coeff, std::move(slots)});
}

CoeffPolynomial LinearCoeffOperator::apply(const CoeffPolynomial& p) const {
  if (!p.is_zero() && p.chart() != chart_) fail(ErrorKind::ChartMismatch, "operator applied across charts");
  CoeffPolynomial out(chart_);
  for (const auto& term : terms_) {
    CoeffPolynomial d = p;
    for (int s : term.slots) d = d.derivative(s);
    if (!d.is_zero()) out += term.coeff * d;
  }
  return out;
}

bool LinearCoeffOperator::is_first_order() const {
  return std::all_of(terms_.begin(), terms_.end(), [](const OperatorTerm& t) { return t.slots.size() <= 1; });
}

LinearCoeffOperator& LinearCoeffOperator::operator+=(const LinearCoeffOperator& other) {
  if (other.chart_ != chart_) fail(ErrorKind::ChartMismatch, "operators live on different charts");
  variables_ = std::max(variables_, other.variables_);
  for (const auto& t : other.terms_) terms_.push_back(t);
  return *this;
}

LinearCoeffOperator operator*(const Rational& s, const LinearCoeffOperator& a) {
  LinearCoeffOperator r(a.chart_, a.variables_);
  for (const auto& t : a.terms_) r.add_term(s * t.coeff, t.slots);
  return r;
}

std::vector<Exponents> monomial_basis(int variables, int max_weight) {
  std::vector<Exponents> out;
  Exponents current(static_cast<std::size_t>(std::max(variables, 0)), 0);
  std::function<void(int, int)> rec = [&](int slot, int remaining) {
    if (slot < 0) {
      Exponents e = current;
      trim(e);
      out.push_back(std::move(e));
      return;
    }
    int w = slot + 1;
    for (int k = 0; k * w <= remaining; ++k) {
      current[slot] = k;
      rec(slot - 1, remaining - k * w);
    }
    current[slot] = 0;
  };
  rec(variables - 1, max_weight);
  std::sort(out.begin(), out.end(), [](const Exponents& a, const Exponents& b) {
    int wa = weight_of(a), wb = weight_of(b);
    if (wa != wb) return wa < wb;
    std::size_t n = std::max(a.size(), b.size());
    for (std::size_t s = 0; s < n; ++s) {
      int x = s < a.size() ? a[s] : 0, y = s < b.size() ? b[s] : 0;
      if (x != y) return x > y;
    }
    return false;
  });
  return out;
}

OperatorAction action_on_basis(const LinearCoeffOperator& op, int max_weight) {
  OperatorAction a;
  a.basis = monomial_basis(op.variables(), max_weight);
  for (const auto& e : a.basis) a.images.push_back(op.apply(CoeffPolynomial::monomial(op.chart(), e)));
  return a;
}

OperatorAction operator-(const OperatorAction& a, const OperatorAction& b) {
  if (a.basis != b.basis) fail(ErrorKind::ChartMismatch, "operator actions on different bases");
  OperatorAction r{a.basis, {}};
  for (std::size_t i = 0; i < a.images.size(); ++i) r.images.push_back(a.images[i] - b.images[i]);
  return r;
}

OperatorAction operator*(const Rational& s, const OperatorAction& a) {
  OperatorAction r{a.basis, {}};
  for (const auto& p : a.images) r.images.push_back(s * p);
  return r;
}

std::optional<Rational> scalar_multiple_of_identity(const OperatorAction& action) {
  std::optional<Rational> lambda;
  for (std::size_t i = 0; i < action.basis.size(); ++i) {
    const auto& img = action.images[i];
    Rational coeff = img.coefficient(action.basis[i]);
    if (!(img == coeff * CoeffPolynomial::monomial(img.chart(), action.basis[i])) && !img.is_zero()) return std::nullopt;
    if (img.is_zero()) coeff = 0;
    if (lambda && *lambda != coeff) return std::nullopt;
    lambda = coeff;
  }
  return lambda;
}

} // namespace loewner
