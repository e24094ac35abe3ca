#include "loewner/error.hpp"

#include <cctype>

#include "loewner/scalar.hpp"

namespace loewner {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::ZeroLeadingCoefficient: return "ZeroLeadingCoefficient";
    case ErrorKind::NonzeroConstantTerm: return "NonzeroConstantTerm";
    case ErrorKind::InsufficientOrder: return "InsufficientOrder";
    case ErrorKind::InexactOperation: return "InexactOperation";
    case ErrorKind::SectorMismatch: return "SectorMismatch";
    case ErrorKind::DegenerateDiagonal: return "DegenerateDiagonal";
    case ErrorKind::NotInDisc: return "NotInDisc";
    case ErrorKind::NonzeroMean: return "NonzeroMean";
    case ErrorKind::InsufficientResolution: return "InsufficientResolution";
    case ErrorKind::UnsupportedLevel: return "UnsupportedLevel";
    case ErrorKind::ChartMismatch: return "ChartMismatch";
    case ErrorKind::StepRejected: return "StepRejected";
    case ErrorKind::NonpositiveMeasure: return "NonpositiveMeasure";
    case ErrorKind::SwallowTolUnreachable: return "SwallowTolUnreachable";
    case ErrorKind::InsufficientPaths: return "InsufficientPaths";
    case ErrorKind::PathSwallowed: return "PathSwallowed";
    case ErrorKind::ConfigInvalid: return "ConfigInvalid";
  }
  return "Unknown";
}

Rational parse_rational(const std::string& text) {
  std::string s;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
  if (s.empty()) fail(ErrorKind::ConfigInvalid, "empty rational literal");

  auto dot = s.find('.');
  auto exp_pos = s.find_first_of("eE");
  if (dot == std::string::npos && exp_pos == std::string::npos) {
    Rational r;
    if (r.set_str(s, 10) != 0) fail(ErrorKind::ConfigInvalid, "bad rational literal '" + text + "'");
    if (r.get_den() == 0) fail(ErrorKind::ConfigInvalid, "zero denominator in '" + text + "'");
    r.canonicalize();
    return r;
  }

  // Decimal literal: read digits exactly (no binary rounding).
  std::string mantissa = exp_pos == std::string::npos ? s : s.substr(0, exp_pos);
  long exponent = 0;
  if (exp_pos != std::string::npos) {
    try {
      exponent = std::stol(s.substr(exp_pos + 1));
    } catch (...) {
      fail(ErrorKind::ConfigInvalid, "bad exponent in '" + text + "'");
    }
  }
  bool negative = false;
  if (!mantissa.empty() && (mantissa[0] == '-' || mantissa[0] == '+')) {
    negative = mantissa[0] == '-';
    mantissa.erase(0, 1);
  }
  std::string digits;
  long frac_digits = 0;
  bool seen_dot = false;
  for (char ch : mantissa) {
    if (ch == '.') {
      if (seen_dot) fail(ErrorKind::ConfigInvalid, "bad decimal literal '" + text + "'");
      seen_dot = true;
    } else if (std::isdigit(static_cast<unsigned char>(ch))) {
      digits.push_back(ch);
      if (seen_dot) ++frac_digits;
    } else {
      fail(ErrorKind::ConfigInvalid, "bad decimal literal '" + text + "'");
    }
  }
  if (digits.empty()) fail(ErrorKind::ConfigInvalid, "bad decimal literal '" + text + "'");
  mpz_class num(digits, 10);
  long shift = exponent - frac_digits;
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(shift < 0 ? -shift : shift));
  Rational r = shift >= 0 ? Rational(num * scale) : Rational(num, scale);
  r.canonicalize();
  return negative ? Rational(-r) : r;
}

} // namespace loewner
