#include "commands.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "loewner/circle.hpp"
#include "loewner/grunsky.hpp"
#include "loewner/martingale.hpp"
#include "loewner/radial.hpp"
#include "loewner/series.hpp"
#include "loewner/sle.hpp"
#include "loewner/virasoro.hpp"
#include "serialize.hpp"

namespace loewner::cli {

namespace {

// Assembles the JSON artifact of a command: software tag, config echo, result.
Artifact document(const std::string& command, const Params& params, Json result) {
  Json doc{{"software", {{"name", "loewner"}, {"version", kVersion}}},
           {"command", command},
           {"config", params.resolved()},
           {"result", std::move(result)}};
  return {command + ".json", doc.dump(2) + "\n"};
}

RunOutcome single(const std::string& command, const Params& params, Json result) {
  RunOutcome out;
  out.artifacts.push_back(document(command, params, std::move(result)));
  return out;
}

std::string series_csv(const TruncatedTaylor<Complex>& f) {
  std::ostringstream out;
  out << "k,re,im\n";
  for (int k = 0; k <= f.order(); ++k) out << k << "," << csv_number(f[k].real()) << "," << csv_number(f[k].imag()) << "\n";
  return out.str();
}

bool is_laurent(const Json& v) { return v.is_object() && v.value("kind", std::string()) == "laurent_inf"; }

// ------------------------------------------------------------------ series

template <class T>
RunOutcome series_command(Params& params, const std::string& op) {
  Json f_doc = params.object("f");
  bool binary = op == "compose" || op == "add" || op == "sub" || op == "mul" || op == "div";
  Json g_doc = binary ? params.object("g") : Json();
  if (is_laurent(f_doc) && op != "invert") config_error("f", "Laurent series at infinity only support op \"invert\"");
  params.finish();

  Json result;
  if (op == "invert") {
    if (is_laurent(f_doc)) {
      result["series"] = series_json(invert_at_infinity(parse_laurent<T>(f_doc, "f")));
    } else {
      result["series"] = series_json(invert_at_infinity(parse_taylor<T>(f_doc, "f")));
    }
    return single("series", params, result);
  }
  auto f = parse_taylor<T>(f_doc, "f");
  if (op == "debranges") {
    result["violated"] = debranges_check(f);
    return single("series", params, result);
  }
  TruncatedTaylor<T> out;
  if (binary) {
    auto g = parse_taylor<T>(g_doc, "g");
    if (op == "compose") out = compose(f, g);
    if (op == "add") out = f + g;
    if (op == "sub") out = f - g;
    if (op == "mul") out = mul(f, g);
    if (op == "div") out = div(f, g);
  } else if (op == "reversion") {
    out = reversion(f);
  } else if (op == "log") {
    out = log(f);
  } else if (op == "exp") {
    out = exp(f);
  } else if (op == "derivative") {
    out = derivative(f);
  } else {
    out = schwarzian(f);
  }
  result["series"] = series_json(out);
  auto outcome = single("series", params, result);
  outcome.artifacts.push_back({"series.csv", series_csv(to_complex(out))});
  return outcome;
}

RunOutcome run_series(Params& params) {
  auto arithmetic = params.choice("arithmetic", "float", {"float", "rational"});
  auto op = params.choice("op", "reversion",
                          {"compose", "reversion", "invert", "log", "exp", "derivative", "schwarzian", "add", "sub",
                           "mul", "div", "debranges"});
  return arithmetic == "rational" ? series_command<Rational>(params, op) : series_command<Complex>(params, op);
}

// ------------------------------------------------------------------ grunsky / faber / embed

template <class T>
RunOutcome grunsky_command(Params& params) {
  int N = static_cast<int>(params.integer("N", 8, 1, 256));
  bool has_f = params.has("f"), has_g = params.has("g");
  if (!has_f && !has_g) config_error("f", "grunsky needs f (Taylor at 0), g (Laurent at infinity), or both");
  Json f_doc = has_f ? params.object("f") : Json(), g_doc = has_g ? params.object("g") : Json();
  params.finish();

  GrunskyData<T> data;
  if (has_f && has_g) {
    data = grunsky_pair(parse_taylor<T>(f_doc, "f"), parse_laurent<T>(g_doc, "g"), N);
  } else if (has_f) {
    data = grunsky_single(parse_taylor<T>(f_doc, "f"), N);
  } else {
    data = grunsky_single(parse_laurent<T>(g_doc, "g"), N);
  }
  Json blocks = Json::array();
  RunOutcome outcome;
  std::vector<Artifact> csvs;
  auto emit = [&](const std::optional<BivariateTruncated<T>>& block, const std::string& name) {
    if (!block) return;
    blocks.push_back(matrix_json(*block, name));
    csvs.push_back({"grunsky_" + name + ".csv", matrix_csv(*block)});
  };
  emit(data.c, "c");
  emit(data.d, "d");
  emit(data.e, "e");
  Json result{{"N", N}, {"r", scalar_json(data.r)}, {"R", scalar_json(data.R)}, {"blocks", blocks}};
  outcome = single("grunsky", params, result);
  for (auto& a : csvs) outcome.artifacts.push_back(std::move(a));
  return outcome;
}

template <class T>
Json polynomial_list(const std::vector<std::vector<T>>& polys) {
  Json out = Json::array();
  for (std::size_t n = 1; n < polys.size(); ++n) {
    Json coeffs = Json::array();
    for (const auto& x : polys[n]) coeffs.push_back(scalar_json(x));
    Json entry{{"n", n}, {"coeffs", coeffs}};
    if constexpr (ScalarTraits<T>::exact) {
      Json exact = Json::array();
      for (const auto& x : polys[n]) exact.push_back(x.get_str());
      entry["exact"] = exact;
    }
    out.push_back(entry);
  }
  return out;
}

template <class T>
RunOutcome faber_command(Params& params) {
  int N = static_cast<int>(params.integer("N", 6, 1, 256));
  bool has_f = params.has("f"), has_g = params.has("g");
  if (!has_f && !has_g) config_error("f", "faber needs f, g, or both");
  Json f_doc = has_f ? params.object("f") : Json(), g_doc = has_g ? params.object("g") : Json();
  bool identities = params.flag("identities", has_f && has_g);
  if (identities && !(has_f && has_g)) config_error("identities", "needs both f and g");
  params.finish();

  Json result{{"N", N}};
  if (has_g) result["G"] = polynomial_list(faber_G(parse_laurent<T>(g_doc, "g"), N));
  if (has_f) result["F"] = polynomial_list(faber_F(parse_taylor<T>(f_doc, "f"), N));
  if (identities) {
    auto r = faber_grunsky_identities(parse_taylor<T>(f_doc, "f"), parse_laurent<T>(g_doc, "g"), N);
    result["residuals"] = {{"G_of_g", number(r.G_of_g)},
                           {"G_of_f", number(r.G_of_f)},
                           {"F_of_g", number(r.F_of_g)},
                           {"F_of_f", number(r.F_of_f)},
                           {"max", number(r.max())}};
  }
  return single("faber", params, result);
}

template <class T>
RunOutcome embed_command(Params& params) {
  int N = static_cast<int>(params.integer("N", 6, 1, 128));
  Json f_doc = params.object("f");
  bool require_disc = params.flag("require_disc", true);
  params.finish();

  auto emb = yk_embedding(parse_taylor<T>(f_doc, "f"), N);
  Json Z = Json::array();
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) Z.push_back(complex_json(emb.point.Z(i, j)));
  Json result{{"N", N}, {"weighting", emb.point.weighting}, {"Z", Z}, {"consistency", number(emb.consistency)}};
  result["gap"] = number(siegel_gap(emb.point));
  if (require_disc) {
    auto report = siegel_check(emb.point);
    result["symmetric"] = report.symmetric;
    result["kahler_potential"] = number(report.kahler_potential);
  }
  Json rows = Json::array();
  for (int n = 1; n <= N; ++n) rows.push_back(laurent_poly_json(emb.by_grunsky[n]));
  result["rows"] = rows;
  return single("embed", params, result);
}

template <template <class> class Command>
RunOutcome by_arithmetic(Params& params) {
  auto arithmetic = params.choice("arithmetic", "float", {"float", "rational"});
  return arithmetic == "rational" ? Command<Rational>::run(params) : Command<Complex>::run(params);
}

template <class T>
struct GrunskyCmd {
  static RunOutcome run(Params& p) { return grunsky_command<T>(p); }
};
template <class T>
struct FaberCmd {
  static RunOutcome run(Params& p) { return faber_command<T>(p); }
};
template <class T>
struct EmbedCmd {
  static RunOutcome run(Params& p) { return embed_command<T>(p); }
};

// ------------------------------------------------------------------ circle

RunOutcome run_circle(Params& params) {
  auto op = params.choice("op", "hilbert", {"hilbert", "J", "bracket", "omega", "kahler", "metric", "polyakov", "boundary"});
  bool needs_v1 = op == "hilbert" || op == "J" || op == "bracket" || op == "omega" || op == "kahler" ||
                  (op == "polyakov" && !params.has("f"));
  bool needs_v2 = op == "bracket" || op == "omega" || op == "kahler";
  bool needs_ch = op == "omega" || op == "kahler" || op == "metric";
  bool needs_f = op == "boundary" || (op == "polyakov" && params.has("f"));
  FourierField v1, v2;
  if (needs_v1) v1 = parse_fourier(params.object("v1"), "v1");
  if (needs_v2) v2 = parse_fourier(params.object("v2"), "v2");
  CentralParams ch;
  if (needs_ch) {
    ch.c = params.number("c", 0.0);
    ch.h = params.number("h", 0.0);
  }
  int k = op == "metric" ? static_cast<int>(params.integer("k", 1, 1, 1 << 20)) : 0;
  Json f_doc = needs_f ? params.object("f") : Json();
  int grid = needs_f ? static_cast<int>(params.integer("grid", 0, 0, 1 << 22)) : 0;
  params.finish();

  Json result;
  if (op == "hilbert") result["field"] = fourier_json(hilbert_transform(v1));
  if (op == "J") result["field"] = fourier_json(complex_structure_J(v1));
  if (op == "bracket") result["field"] = fourier_json(bracket(v1, v2));
  if (op == "omega") result["value"] = number(omega_ch(v1, v2, ch));
  if (op == "kahler") result["value"] = number(kahler_form(v1, v2, ch));
  if (op == "metric") result["value"] = number(kahler_metric_coeff(k, ch));
  if (op == "polyakov") {
    if (needs_f) {
      auto r = polyakov_alvarez(parse_taylor<Complex>(f_doc, "f"), grid);
      result["value"] = number(r.exponent);
      result["grid"] = r.grid;
    } else {
      result["value"] = number(polyakov_alvarez(v1));
    }
  }
  if (op == "boundary") {
    auto r = boundary_log_derivative(parse_taylor<Complex>(f_doc, "f"), grid);
    result["field"] = fourier_json(r.phi);
    result["grid"] = r.grid;
    result["tail_energy_fraction"] = number(r.tail_energy_fraction);
  }
  return single("circle", params, result);
}

// ------------------------------------------------------------------ virasoro / kernel

Json action_json(const OperatorAction& action, Chart chart) {
  Json out = Json::array();
  for (std::size_t i = 0; i < action.basis.size(); ++i)
    out.push_back({{"basis", coeff_poly_json(CoeffPolynomial::monomial(chart, action.basis[i]))},
                   {"image", coeff_poly_json(action.images[i])}});
  return out;
}

RunOutcome run_virasoro(Params& params) {
  auto op = params.choice("op", "commutator", {"commutator", "operator_commutator", "action", "neretin"});
  if (op == "neretin") {
    Json f_doc = params.object("f");
    FourierField re = parse_fourier(params.object("re"), "re");
    FourierField im = parse_fourier(params.object("im", Json{{"a", {0}}}), "im");
    CentralParams ch{params.number("c", 0.0), params.number("h", 0.0)};
    double tau = params.number("tau", 0.0);
    params.finish();
    Complex value = neretin_cocycle(parse_taylor<Complex>(f_doc, "f"), re, im, ch, tau);
    return single("virasoro", params, Json{{"value", complex_json(value)}});
  }
  VirasoroParams p{params.rational("c", Rational(0)), params.rational("h", Rational(0))};
  int N = static_cast<int>(params.integer("N", 8, 1, 64));
  int weight = static_cast<int>(params.integer("weight", 6, 0, 24));
  int m = static_cast<int>(params.integer("m", 1, -2, 64));
  int n = op == "action" ? 0 : static_cast<int>(params.integer("n", -1, -2, 64));
  params.finish();

  Json result;
  auto A = virasoro_op(m, p, N);
  if (op == "action") {
    result["images"] = action_json(action_on_basis(A, weight), Chart::Disc);
    return single("virasoro", params, result);
  }
  auto B = virasoro_op(n, p, N);
  auto action = op == "commutator" ? commutator(A, B, weight) : operator_commutator(A, B, weight);
  result["images"] = action_json(action, Chart::Disc);
  if (m + n >= -2) {
    Rational factor = op == "commutator" ? Rational(n - m) : Rational(m - n);
    auto defect = action - factor * action_on_basis(virasoro_op(m + n, p, N), weight);
    auto scalar = scalar_multiple_of_identity(defect);
    result["relation_factor"] = factor.get_str();
    result["central_defect"] = scalar ? Json(scalar->get_str()) : Json(nullptr);
  }
  return single("virasoro", params, result);
}

RunOutcome run_kernel(Params& params) {
  auto generator = params.choice("generator", "sle", {"sle", "virasoro"});
  int weight = static_cast<int>(params.integer("weight", 2, 0, 16));
  LinearCoeffOperator op(Chart::Infinity, 1);
  if (generator == "sle") {
    Rational kappa = params.rational("kappa", std::nullopt);
    if (sgn(kappa) <= 0) config_error("kappa", "must be positive");
    int N = static_cast<int>(params.integer("N", std::max(1, weight - 1), 1, 32));
    params.finish();
    op = sle_generator(kappa, N);
  } else {
    VirasoroParams p{params.rational("c", Rational(0)), params.rational("h", Rational(0))};
    int level = static_cast<int>(params.integer("level", 1, -2, 32));
    int N = static_cast<int>(params.integer("N", std::max(1, weight), 1, 32));
    params.finish();
    op = virasoro_op(level, p, N);
  }
  auto basis = kernel_solve(op, weight);
  Json list = Json::array(), names = Json::array();
  for (const auto& P : basis) {
    list.push_back(coeff_poly_json(P));
    names.push_back(P.to_string());
  }
  return single("kernel", params, Json{{"dimension", basis.size()}, {"basis", list}, {"display", names}});
}

// ------------------------------------------------------------------ radial / sle

// u(t) = offset + slope t + amplitude sin(frequency t) + root sqrt(t)
std::function<double(double)> parse_driving_function(const Json& v, const std::string& field) {
  if (!v.is_object()) config_error(field, "driving must be an object");
  std::map<std::string, double> c{{"offset", 0}, {"slope", 0}, {"amplitude", 0}, {"frequency", 0}, {"root", 0}};
  for (const auto& [key, value] : v.items()) {
    if (!c.count(key)) config_error(field + "." + key, "is not a driving parameter");
    if (!value.is_number()) config_error(field + "." + key, "must be a number");
    c[key] = value.get<double>();
  }
  return [c](double t) {
    return c.at("offset") + c.at("slope") * t + c.at("amplitude") * std::sin(c.at("frequency") * t) +
           c.at("root") * std::sqrt(std::max(t, 0.0));
  };
}

MeasureFamily parse_measure(const Json& v, const std::string& field) {
  if (!v.is_object() || !v.contains("kind") || !v["kind"].is_string())
    config_error(field, "measure needs a \"kind\" of uniform, dirac, slit or density");
  std::string kind = v["kind"];
  auto num = [&](const char* key, double fallback) {
    if (!v.contains(key)) return fallback;
    if (!v[key].is_number()) config_error(field + "." + key, "must be a number");
    return v[key].get<double>();
  };
  double mass = num("mass", 1.0);
  if (kind == "uniform") return [mass](double) { return HerglotzMeasure::uniform(mass); };
  if (kind == "dirac") {
    double theta = num("theta", 0.0);
    return [theta, mass](double) { return HerglotzMeasure::dirac(theta, mass); };
  }
  if (kind == "slit") {
    auto u = parse_driving_function(v.value("driving", Json::object()), field + ".driving");
    return [u, mass](double t) { return HerglotzMeasure::dirac(u(t), mass); };
  }
  if (kind == "density") {
    HerglotzMeasure m;
    m.density = parse_fourier(v, field);
    return [m](double) { return m; };
  }
  config_error(field + ".kind", "unknown measure kind '" + kind + "'");
}

RunOutcome run_radial(Params& params) {
  Json f_doc = params.object("f", Json{{"identity", 8}});
  Json measure_doc = params.object("measure", Json{{"kind", "uniform"}});
  double T = params.number("T", 1.0, 0.0, 1e6, true);
  double dt = params.number("dt", 0.1, 0.0, 1e6, true);
  RadialFlowOptions options{params.number("abs_tol", 1e-12, 0, 1, true), params.number("rel_tol", 1e-12, 0, 1, true),
                            params.number("min_step", 1e-12, 0, 1, true)};
  auto f0 = parse_taylor<Complex>(f_doc, "f");
  auto nu = parse_measure(measure_doc, "measure");
  params.finish();

  auto flow = radial_flow(f0, nu, T, dt, options);
  Json times = Json::array(), maps = Json::array();
  std::ostringstream csv;
  csv << "t,k,re,im\n";
  for (std::size_t i = 0; i < flow.times.size(); ++i) {
    times.push_back(number(flow.times[i]));
    maps.push_back(series_json(flow.maps[i]));
    for (int k = 0; k <= flow.maps[i].order(); ++k)
      csv << csv_number(flow.times[i]) << "," << k << "," << csv_number(flow.maps[i][k].real()) << ","
          << csv_number(flow.maps[i][k].imag()) << "\n";
  }
  auto outcome = single("radial", params, Json{{"times", times}, {"maps", maps}});
  outcome.artifacts.push_back({"radial.csv", csv.str()});
  return outcome;
}

Driving read_driving(Params& params, double& T, int& steps) {
  double kappa = params.number("kappa", 0.0, 0.0);
  T = params.number("T", 1.0, 0.0, 1e6, true);
  steps = static_cast<int>(params.integer("steps", 1000, 1, 10000000));
  double dt = T / steps;
  if (kappa > 0) {
    if (params.has("driving")) config_error("driving", "cannot be combined with kappa > 0");
    std::uint64_t seed = params.seed();
    auto path = static_cast<std::uint64_t>(params.integer("path", 0, 0, 1L << 40));
    return Driving::brownian(kappa, seed, dt, path);
  }
  auto driving = Driving::deterministic(parse_driving_function(params.object("driving", Json::object()), "driving"));
  driving.dt = dt;
  return driving;
}

RunOutcome run_sle_trace(Params& params) {
  double T;
  int steps;
  auto driving = read_driving(params, T, steps);
  params.finish();
  auto trace = sle_trace(driving, T, steps);
  std::ostringstream csv;
  csv << "step,t,re,im\n";
  for (const auto& p : trace)
    csv << p.step << "," << csv_number(p.t) << "," << csv_number(p.point.real()) << "," << csv_number(p.point.imag())
        << "\n";
  Json result{{"points", trace.size()}, {"tip", complex_json(trace.back().point)}, {"csv", "sle-trace.csv"}};
  auto outcome = single("sle-trace", params, result);
  outcome.artifacts.push_back({"sle-trace.csv", csv.str()});
  return outcome;
}

RunOutcome run_sle_coeff(Params& params) {
  double T;
  int steps;
  auto driving = read_driving(params, T, steps);
  int N = static_cast<int>(params.integer("N", 4, 1, 64));
  int stride = static_cast<int>(params.integer("stride", 1, 1, 10000000));
  params.finish();
  auto path = coeff_hierarchy(driving, N, T, stride);
  Json times = Json::array(), W = Json::array(), b = Json::array();
  std::ostringstream csv;
  csv << "t,W";
  for (int k = 0; k <= N; ++k) csv << ",b" << k;
  csv << "\n";
  for (std::size_t i = 0; i < path.times.size(); ++i) {
    times.push_back(number(path.times[i]));
    W.push_back(number(path.W[i]));
    Json row = Json::array();
    csv << csv_number(path.times[i]) << "," << csv_number(path.W[i]);
    for (double x : path.b[i]) {
      row.push_back(number(x));
      csv << "," << csv_number(x);
    }
    csv << "\n";
    b.push_back(row);
  }
  Json result{{"kappa", path.kappa}, {"seed", path.seed}, {"dt", path.dt}, {"times", times}, {"W", W}, {"b", b}};
  auto outcome = single("sle-coeff", params, result);
  outcome.artifacts.push_back({"sle-coeff.csv", csv.str()});
  return outcome;
}

// ------------------------------------------------------------------ martingale

EnsembleOptions read_ensemble(Params& params, double default_T) {
  EnsembleOptions o;
  o.kappa = params.number("kappa", std::nullopt, 0.0, 1e6, true);
  o.T = params.number("T", default_T, 0.0, 1e6, true);
  o.dt = params.number("dt", 1e-3, 0.0, o.T, true);
  o.paths = params.integer("paths", 100000, 2, 1L << 40);
  o.seed = params.seed();
  o.checkpoints = static_cast<int>(params.integer("checkpoints", 10, 1, 100000));
  o.chunk = static_cast<int>(params.integer("chunk", 4096, 1, 1 << 30));
  o.threads = static_cast<int>(params.integer("threads", 1, 1, 1024));
  o.z_crit = params.number("z_crit", 4.0, 0.0, 1e6, true);
  o.effect_size = params.number("effect_size", 0.0, 0.0);
  o.max_swallowed_fraction = params.number("max_swallowed_fraction", 0.01, 0.0, 1.0);
  o.localization = params.number("localization", 0.3, 0.0, 0.999);
  return o;
}

Json calibration_json(const Calibration& c) {
  return {{"b1_exact", c.b1_exact},
          {"b0_square_mean", number(c.b0_square_mean)},
          {"b0_square_z", number(c.b0_square_z)},
          {"passed", c.passed}};
}

RunOutcome run_martingale(Params& params) {
  auto suite = params.choice("suite", "kernel", {"kernel", "polynomial", "observable", "density"});
  RunOutcome outcome;
  Json result{{"suite", suite}};
  std::vector<DriftReport> reports;
  std::optional<Calibration> calibration;

  if (suite == "kernel") {
    Rational kappa = params.rational("kappa", std::nullopt);
    if (sgn(kappa) <= 0) config_error("kappa", "must be positive");
    int weight = static_cast<int>(params.integer("weight", 2, 1, 8));
    Rational perturbation = params.rational("perturbation", Rational(1, 2));
    auto o = read_ensemble(params, 1.0);
    params.finish();
    auto r = kernel_martingale_suite(kappa, weight, o, perturbation);
    Json kernel = Json::array();
    for (const auto& k : r.kernel) kernel.push_back(drift_report_json(k));
    result["kernel"] = kernel;
    result["perturbed"] = drift_report_json(r.perturbed);
    result["all_consistent"] = r.all_consistent;
    result["perturbed_detected"] = r.perturbed_detected;
    reports = r.kernel;
    reports.push_back(r.perturbed);
    calibration = r.calibration;
  } else if (suite == "polynomial") {
    Json poly_doc = params.object("polynomial");
    auto o = read_ensemble(params, 1.0);
    params.finish();
    auto P = parse_coeff_poly(poly_doc, Chart::Infinity, "polynomial");
    auto s = drift_suite({{P.to_string(), P}}, o);
    result["report"] = drift_report_json(s.reports.front());
    reports = s.reports;
    calibration = s.calibration;
  } else if (suite == "observable") {
    double x = params.number("x", 1.0, 0.0, 1e6, true);
    auto o = read_ensemble(params, 0.2);
    double beta = params.number("beta", std::nullopt);
    double alpha = params.number("alpha", ito_alpha(beta, o.kappa));
    params.finish();
    auto r = observable_drift_test(alpha, beta, x, o);
    result["predicted_alpha"] = number(ito_alpha(beta, o.kappa));
    result["report"] = drift_report_json(r);
    reports.push_back(r);
  } else {
    double x = params.number("x", 1.0, 0.0, 1e6, true);
    auto o = read_ensemble(params, 0.2);
    params.finish();
    auto r = rn_density_report(x, o);
    Json t = Json::array(), bf = Json::array(), lf = Json::array(), lm = Json::array(), sc = Json::array();
    for (std::size_t i = 0; i < r.times.size(); ++i) {
      t.push_back(number(r.times[i]));
      bf.push_back(number(r.boundary_factor_mean[i]));
      lf.push_back(number(r.log_factor_mean[i]));
      lm.push_back(number(r.log_factor_max_abs[i]));
      sc.push_back(number(r.schwarzian_mean[i]));
    }
    result["c"] = number(r.ch.c);
    result["h"] = number(r.ch.h);
    result["beta"] = number(r.beta);
    result["times"] = t;
    result["boundary_factor_mean"] = bf;
    result["log_factor_mean"] = lf;
    result["log_factor_max_abs"] = lm;
    result["schwarzian_mean"] = sc;
    result["log_identically_zero"] = r.log_identically_zero;
    result["cross_check"] = drift_report_json(r.cross_check);
    reports.push_back(r.cross_check);
  }
  if (calibration) result["calibration"] = calibration_json(*calibration);
  outcome = single("martingale", params, result);
  outcome.artifacts.push_back({"martingale.csv", drift_csv(reports)});
  if (calibration && !calibration->passed) {
    outcome.exit_code = kStatisticalError;
    outcome.message = "calibration gate failed: b1(T) = 2T or E[b0(T)^2] = kappa T not reproduced";
  }
  return outcome;
}

// ------------------------------------------------------------------ report

Json summarize_artifact(const Json& doc) {
  Json s{{"command", doc.value("command", "")}, {"version", doc["software"].value("version", "")}};
  const Json& r = doc["result"];
  std::string command = s["command"];
  if (command == "martingale") {
    s["suite"] = r.value("suite", "");
    Json verdicts = Json::object();
    auto add = [&](const Json& report) { verdicts[report["observable"].get<std::string>()] = report["verdict"]; };
    if (r.contains("kernel"))
      for (const auto& k : r["kernel"]) add(k);
    if (r.contains("perturbed")) add(r["perturbed"]);
    if (r.contains("report")) add(r["report"]);
    if (r.contains("cross_check")) add(r["cross_check"]);
    s["verdicts"] = verdicts;
    if (r.contains("calibration")) s["calibration_passed"] = r["calibration"]["passed"];
  } else if (command == "grunsky") {
    s["blocks"] = r["blocks"].size();
  } else if (command == "kernel") {
    s["dimension"] = r["dimension"];
    s["display"] = r["display"];
  } else if (command == "sle-trace") {
    s["points"] = r["points"];
    s["tip"] = r["tip"];
  } else if (command == "faber" && r.contains("residuals")) {
    s["residual"] = r["residuals"]["max"];
  } else if (r.contains("value")) {
    s["value"] = r["value"];
  }
  return s;
}

RunOutcome run_report(Params& params) {
  Json inputs = params.object("inputs");
  if (!inputs.is_array() || inputs.empty()) config_error("inputs", "must be a nonempty list of artifact paths");
  std::vector<Json> docs;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    std::string field = "inputs[" + std::to_string(i) + "]";
    if (!inputs[i].is_string()) config_error(field, "must be a file path");
    std::ifstream in(inputs[i].get<std::string>());
    if (!in) config_error(field, "cannot read '" + inputs[i].get<std::string>() + "'");
    auto doc = Json::parse(in, nullptr, false);
    if (doc.is_discarded() || !doc.is_object() || !doc.contains("software") || !doc.contains("result"))
      config_error(field, "is not an artifact produced by this tool");
    docs.push_back(std::move(doc));
  }
  params.finish();
  Json entries = Json::array();
  std::ostringstream csv;
  csv << "input,command,version\n";
  for (std::size_t i = 0; i < docs.size(); ++i) {
    Json s = summarize_artifact(docs[i]);
    s["input"] = inputs[i];
    csv << '"' << inputs[i].get<std::string>() << "\"," << s["command"].get<std::string>() << ","
        << s["version"].get<std::string>() << "\n";
    entries.push_back(std::move(s));
  }
  auto outcome = single("report", params, Json{{"entries", entries}});
  outcome.artifacts.push_back({"report.csv", csv.str()});
  return outcome;
}

using Runner = RunOutcome (*)(Params&);

const std::map<std::string, Runner>& registry() {
  static const std::map<std::string, Runner> table{
      {"series", run_series},
      {"grunsky", by_arithmetic<GrunskyCmd>},
      {"faber", by_arithmetic<FaberCmd>},
      {"embed", by_arithmetic<EmbedCmd>},
      {"circle", run_circle},
      {"virasoro", run_virasoro},
      {"kernel", run_kernel},
      {"radial", run_radial},
      {"sle-trace", run_sle_trace},
      {"sle-coeff", run_sle_coeff},
      {"martingale", run_martingale},
      {"report", run_report},
  };
  return table;
}

} // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"series", "grunsky", "faber", "embed", "circle", "virasoro",
                                              "kernel", "radial", "sle-trace", "sle-coeff", "martingale", "report"};
  return names;
}

RunOutcome run_command(const std::string& command, const Json& config) {
  auto it = registry().find(command);
  if (it == registry().end()) config_error("command", "unknown command '" + command + "'");
  Json doc = config;
  if (doc.is_object() && doc.contains("command")) {
    if (!doc["command"].is_string() || doc["command"] != command)
      config_error("command", "config is for '" + doc["command"].dump() + "', not '" + command + "'");
    doc.erase("command");
  }
  Params params(doc);
  return it->second(params);
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ConfigInvalid: return kConfigError;
    case ErrorKind::InsufficientPaths:
    case ErrorKind::PathSwallowed: return kStatisticalError;
    default: return kNumericError;
  }
}

void write_artifacts(const std::vector<Artifact>& artifacts, const std::string& directory) {
  std::filesystem::create_directories(directory);
  for (const auto& a : artifacts) {
    std::ofstream out(std::filesystem::path(directory) / a.name, std::ios::binary);
    out << a.content;
    if (!out) fail(ErrorKind::ConfigInvalid, "cannot write artifact " + a.name + " in " + directory);
  }
}

} // namespace loewner::cli
