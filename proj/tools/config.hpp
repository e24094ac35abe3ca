#pragma once

// Validated access to a JSON run configuration. Every read records the
// effective value (including defaults) for the artifact's config echo;
// finish() rejects keys that no reader asked for.

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "loewner/scalar.hpp"

namespace loewner::cli {

using Json = nlohmann::json;

[[noreturn]] void config_error(const std::string& field, const std::string& message);

class Params {
public:
  explicit Params(Json document);

  bool has(const std::string& key) const { return doc_.contains(key); }

  double number(const std::string& key, std::optional<double> fallback, double min = -1e300, double max = 1e300,
                bool exclusive_min = false);
  long integer(const std::string& key, std::optional<long> fallback, long min, long max);
  bool flag(const std::string& key, bool fallback);
  std::string choice(const std::string& key, const std::string& fallback, const std::vector<std::string>& options);
  Rational rational(const std::string& key, std::optional<Rational> fallback);
  std::uint64_t seed(const std::string& key = "seed");
  // Raw sub-document; the caller validates its shape.
  Json object(const std::string& key, std::optional<Json> fallback = std::nullopt);

  void finish() const;
  const Json& resolved() const { return resolved_; }

private:
  const Json* lookup(const std::string& key);

  Json doc_;
  Json resolved_ = Json::object();
  std::set<std::string> used_;
};

// Reads a JSON document from a file path or, when the text starts with '{',
// from the text itself.
Json load_config(const std::string& source);

// Applies "key=value" overrides to top-level fields; the value is parsed as
// JSON when possible and kept as a string otherwise.
void apply_override(Json& document, const std::string& assignment);

} // namespace loewner::cli
