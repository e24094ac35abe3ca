#include "config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "loewner/error.hpp"

namespace loewner::cli {

void config_error(const std::string& field, const std::string& message) {
  fail(ErrorKind::ConfigInvalid, "field '" + field + "': " + message);
}

Params::Params(Json document) : doc_(std::move(document)) {
  if (!doc_.is_object()) config_error("<root>", "configuration must be a JSON object");
}

const Json* Params::lookup(const std::string& key) {
  used_.insert(key);
  auto it = doc_.find(key);
  return it == doc_.end() ? nullptr : &*it;
}

double Params::number(const std::string& key, std::optional<double> fallback, double min, double max,
                      bool exclusive_min) {
  const Json* v = lookup(key);
  double x;
  if (!v) {
    if (!fallback) config_error(key, "is required");
    x = *fallback;
  } else if (v->is_number()) {
    x = v->get<double>();
  } else if (v->is_string()) {
    x = parse_rational(v->get<std::string>()).get_d();
  } else {
    config_error(key, "must be a number");
  }
  if (!std::isfinite(x)) config_error(key, "must be finite");
  if (x < min || (exclusive_min && x == min)) config_error(key, "must be " + std::string(exclusive_min ? "> " : ">= ") + Json(min).dump());
  if (x > max) config_error(key, "must be <= " + Json(max).dump());
  resolved_[key] = x;
  return x;
}

long Params::integer(const std::string& key, std::optional<long> fallback, long min, long max) {
  const Json* v = lookup(key);
  long x;
  if (!v) {
    if (!fallback) config_error(key, "is required");
    x = *fallback;
  } else if (v->is_number_integer()) {
    x = v->get<long>();
  } else if (v->is_number_float() && std::floor(v->get<double>()) == v->get<double>() &&
             std::abs(v->get<double>()) < 9e15) {
    x = static_cast<long>(v->get<double>());
  } else {
    config_error(key, "must be an integer");
  }
  if (x < min || x > max) config_error(key, "must be in [" + std::to_string(min) + ", " + std::to_string(max) + "]");
  resolved_[key] = x;
  return x;
}

bool Params::flag(const std::string& key, bool fallback) {
  const Json* v = lookup(key);
  bool x = fallback;
  if (v) {
    if (!v->is_boolean()) config_error(key, "must be true or false");
    x = v->get<bool>();
  }
  resolved_[key] = x;
  return x;
}

std::string Params::choice(const std::string& key, const std::string& fallback,
                           const std::vector<std::string>& options) {
  const Json* v = lookup(key);
  std::string x = fallback;
  if (v) {
    if (!v->is_string()) config_error(key, "must be a string");
    x = v->get<std::string>();
  }
  bool known = false;
  for (const auto& o : options) known = known || o == x;
  if (!known) {
    std::string list;
    for (const auto& o : options) list += (list.empty() ? "" : ", ") + o;
    config_error(key, "must be one of {" + list + "}, got '" + x + "'");
  }
  resolved_[key] = x;
  return x;
}

Rational Params::rational(const std::string& key, std::optional<Rational> fallback) {
  const Json* v = lookup(key);
  Rational x;
  if (!v) {
    if (!fallback) config_error(key, "is required");
    x = *fallback;
  } else if (v->is_number_integer()) {
    x = Rational(v->get<long>());
  } else if (v->is_number_float()) {
    x = parse_rational(v->dump());
  } else if (v->is_string()) {
    try {
      x = parse_rational(v->get<std::string>());
    } catch (const Error& e) {
      config_error(key, e.what());
    }
  } else {
    config_error(key, "must be a rational number or a string like \"8/3\"");
  }
  resolved_[key] = x.get_str();
  return x;
}

std::uint64_t Params::seed(const std::string& key) {
  const Json* v = lookup(key);
  if (!v) config_error(key, "is required for stochastic commands");
  if (!v->is_number_unsigned() && !(v->is_number_integer() && v->get<long>() >= 0))
    config_error(key, "must be a nonnegative integer");
  auto s = v->get<std::uint64_t>();
  resolved_[key] = s;
  return s;
}

Json Params::object(const std::string& key, std::optional<Json> fallback) {
  const Json* v = lookup(key);
  if (!v) {
    if (!fallback) config_error(key, "is required");
    resolved_[key] = *fallback;
    return *fallback;
  }
  resolved_[key] = *v;
  return *v;
}

void Params::finish() const {
  for (const auto& [key, _] : doc_.items())
    if (!used_.count(key)) config_error(key, "is not a recognized setting for this command");
}

Json load_config(const std::string& source) {
  std::string text = source;
  std::size_t first = source.find_first_not_of(" \t\r\n");
  if (first == std::string::npos || source[first] != '{') {
    std::ifstream in(source);
    if (!in) config_error("--config", "cannot read '" + source + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    text = buffer.str();
  }
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    config_error("--config", std::string("invalid JSON: ") + e.what());
  }
}

void apply_override(Json& document, const std::string& assignment) {
  auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) config_error("--set", "expected key=value, got '" + assignment + "'");
  std::string key = assignment.substr(0, eq), value = assignment.substr(eq + 1);
  if (key.find('.') != std::string::npos) config_error("--set", "only top-level fields can be overridden");
  auto parsed = Json::parse(value, nullptr, false);
  document[key] = parsed.is_discarded() ? Json(value) : parsed;
}

} // namespace loewner::cli
