#include "doctest.h"

#include <cmath>

#include "commands.hpp"
#include "loewner/error.hpp"
#include "serialize.hpp"

using namespace loewner;
using namespace loewner::cli;

namespace {

Json artifact_json(const RunOutcome& out, const std::string& name) {
  for (const auto& a : out.artifacts)
    if (a.name == name) return Json::parse(a.content);
  FAIL("missing artifact " << name);
  return {};
}

std::string config_message(const std::string& command, const Json& config) {
  try {
    run_command(command, config);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ConfigInvalid);
    return e.what();
  }
  FAIL("expected a config error");
  return {};
}

} // namespace

TEST_CASE("artifacts carry version and config echo") {
  auto out = run_command("kernel", Json{{"kappa", "8/3"}, {"weight", 2}});
  auto doc = artifact_json(out, "kernel.json");
  CHECK(doc["software"]["version"] == "0.1.0");
  CHECK(doc["command"] == "kernel");
  CHECK(doc["config"]["kappa"] == "8/3");
  CHECK(doc["config"]["generator"] == "sle");
  CHECK(doc["config"]["N"] == 1);
  CHECK(doc["result"]["dimension"] == 3);
  // {monomial, coeff} form of b1 - (3/4) b0^2
  Json last = doc["result"]["basis"][2];
  auto P = parse_coeff_poly(last, Chart::Infinity, "basis");
  CHECK(P == CoeffPolynomial::coordinate(Chart::Infinity, 1) -
                 Rational(3, 4) * CoeffPolynomial::coordinate(Chart::Infinity, 0) *
                     CoeffPolynomial::coordinate(Chart::Infinity, 0));
  CHECK(coeff_poly_json(P) == last);
}

TEST_CASE("config validation names the field and precedes any output") {
  CHECK(config_message("kernel", Json{{"kappa", 2}, {"wieght", 3}}).find("'wieght'") != std::string::npos);
  CHECK(config_message("kernel", Json{{"kappa", -1}}).find("'kappa'") != std::string::npos);
  CHECK(config_message("martingale", Json{{"kappa", 2}}).find("'seed'") != std::string::npos);
  CHECK(config_message("sle-coeff", Json{{"kappa", 2}}).find("'seed'") != std::string::npos);
  CHECK(config_message("grunsky", Json{{"f", {{"koebe", 17}}}, {"N", "eight"}}).find("'N'") != std::string::npos);
  CHECK(config_message("series", Json{{"f", {{"kind", "taylor"}, {"coeffs", {0, 1, "x"}}}}}).find("f.coeffs[2]") !=
        std::string::npos);
  CHECK(config_message("nope", Json::object()).find("unknown command") != std::string::npos);
  CHECK(config_message("kernel", Json{{"command", "grunsky"}, {"kappa", 2}}).find("'command'") != std::string::npos);
  CHECK(config_message("report", Json{{"inputs", {"/nonexistent/x.json"}}}).find("inputs[0]") != std::string::npos);
}

TEST_CASE("overrides and inline configs") {
  Json doc = load_config("{\"kappa\": 2}");
  apply_override(doc, "kappa=8/3");
  apply_override(doc, "weight=3");
  apply_override(doc, "exact=true");
  CHECK(doc["kappa"] == "8/3");
  CHECK(doc["weight"] == 3);
  CHECK(doc["exact"] == true);
  CHECK_THROWS_AS(apply_override(doc, "novalue"), Error);
  CHECK_THROWS_AS(apply_override(doc, "a.b=1"), Error);
  CHECK_THROWS_AS(load_config("{not json"), Error);
}

TEST_CASE("exit codes by error kind") {
  CHECK(exit_code_for(ErrorKind::ConfigInvalid) == 2);
  CHECK(exit_code_for(ErrorKind::NotInDisc) == 3);
  CHECK(exit_code_for(ErrorKind::SwallowTolUnreachable) == 3);
  CHECK(exit_code_for(ErrorKind::PathSwallowed) == 4);
  CHECK(exit_code_for(ErrorKind::InsufficientPaths) == 4);
}

TEST_CASE("grunsky command on the Koebe function") {
  auto out = run_command("grunsky", Json{{"f", {{"koebe", 17}}}, {"N", 8}, {"arithmetic", "rational"}});
  auto doc = artifact_json(out, "grunsky.json");
  Json block = doc["result"]["blocks"][0];
  CHECK(block["block"] == "c");
  CHECK(block["N"] == 8);
  for (int m = 0; m <= 8; ++m)
    for (int n = 0; n <= 8; ++n) {
      Rational want = 0;
      if (m == n && n > 0) want = Rational(1, n);
      if (n == 0 && m > 0) want = Rational(-2, m);
      if (m == 0 && n > 0) want = Rational(-2, n);
      want.canonicalize();
      CHECK(parse_rational(block["exact"][m * 9 + n]) == want);
    }
  CHECK(out.artifacts.size() == 2);
  CHECK(out.artifacts[1].name == "grunsky_c.csv");
}

TEST_CASE("series command round trip through JSON") {
  Json f{{"kind", "taylor"}, {"coeffs", {0, 1, "1/3", Json::array({"-2", 0}), 5}}};
  auto rev = artifact_json(run_command("series", Json{{"f", f}, {"op", "reversion"}, {"arithmetic", "rational"}}),
                           "series.json")["result"]["series"];
  Json g{{"kind", "taylor"}, {"coeffs", rev["exact"]}};
  auto back = artifact_json(run_command("series", Json{{"f", f}, {"g", g}, {"op", "compose"}, {"arithmetic", "rational"}}),
                            "series.json")["result"]["series"];
  CHECK(back["exact"] == Json({"0", "1", "0", "0", "0"}));
  auto inv = artifact_json(run_command("series", Json{{"f", f}, {"op", "invert"}}), "series.json")["result"]["series"];
  CHECK(inv["kind"] == "laurent_inf");
  CHECK(inv["coeffs"][0][0] == 1.0);
}

TEST_CASE("sle-trace with zero driving approximates the vertical slit") {
  auto out = run_command("sle-trace", Json{{"T", 1}, {"steps", 200}});
  REQUIRE(out.artifacts.size() == 2);
  const auto& csv = out.artifacts[1].content;
  CHECK(csv.rfind("step,t,re,im\n", 0) == 0);
  auto doc = artifact_json(out, "sle-trace.json");
  CHECK(std::abs(doc["result"]["tip"][0].get<double>()) < 1e-12);
  CHECK(std::abs(doc["result"]["tip"][1].get<double>() - 2.0) < 1e-9);
  CHECK(doc["result"]["points"] == 201);
}

TEST_CASE("martingale kernel suite at kappa 6 is all consistent") {
  Json cfg{{"suite", "kernel"}, {"kappa", 6}, {"paths", 20000}, {"seed", 4}, {"weight", 2}};
  auto out = run_command("martingale", cfg);
  CHECK(out.exit_code == 0);
  auto doc = artifact_json(out, "martingale.json");
  CHECK(doc["result"]["all_consistent"] == true);
  CHECK(doc["result"]["perturbed_detected"] == true);
  CHECK(doc["result"]["calibration"]["passed"] == true);
  CHECK(doc["config"]["chunk"] == 4096);
  CHECK(doc["config"]["threads"] == 1);
  CHECK(out.artifacts[1].content.rfind("observable,t,mean,se,z\n", 0) == 0);
}

TEST_CASE("stochastic artifacts are byte identical across runs and thread counts") {
  Json cfg{{"suite", "observable"}, {"kappa", 2}, {"beta", 2}, {"paths", 4000}, {"seed", 11}, {"chunk", 500}};
  auto a = run_command("martingale", cfg);
  auto b = run_command("martingale", cfg);
  REQUIRE(a.artifacts.size() == b.artifacts.size());
  for (std::size_t i = 0; i < a.artifacts.size(); ++i) CHECK(a.artifacts[i].content == b.artifacts[i].content);
  Json threaded = cfg;
  threaded["threads"] = 3;
  auto c = run_command("martingale", threaded);
  auto serial_result = artifact_json(a, "martingale.json")["result"];
  auto threaded_result = artifact_json(c, "martingale.json")["result"];
  CHECK(threaded_result["report"]["ensemble"]["threads"] == 3);
  threaded_result["report"]["ensemble"]["threads"] = 1;
  CHECK(serial_result == threaded_result);
  CHECK(a.artifacts[1].content == c.artifacts[1].content);

  Json coeff{{"kappa", 3}, {"seed", 2}, {"T", 0.1}, {"steps", 100}, {"N", 4}};
  CHECK(run_command("sle-coeff", coeff).artifacts[1].content == run_command("sle-coeff", coeff).artifacts[1].content);
}

TEST_CASE("non-finite numbers serialize as strings") {
  CHECK(number(INFINITY) == "inf");
  CHECK(number(-INFINITY) == "-inf");
  CHECK(number(NAN) == "nan");
  CHECK(number(0.25) == 0.25);
  auto out = run_command("martingale", Json{{"suite", "polynomial"},
                                            {"kappa", 2},
                                            {"paths", 100},
                                            {"seed", 1},
                                            {"T", 0.1},
                                            {"polynomial", {{{"monomial", {{"b1", 1}}}, {"coeff", "1"}}}}});
  auto report = artifact_json(out, "martingale.json")["result"]["report"];
  CHECK(report["verdict"] == "drift_detected");
  CHECK(report["max_abs_z"] == "inf");
}
