#include <algorithm>
#include <cmath>
#include <set>

#include "eqm/scenario.hpp"

namespace eqm {

namespace {

using literals::read_density;
using literals::read_state;

std::string idx(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

double number(const json& j, const std::string& path) {
  if (!j.is_number()) throw ConfigError(path, "expected a number");
  const double x = j.get<double>();
  if (!std::isfinite(x)) throw ConfigError(path, "non-finite number");
  return x;
}

int integer(const json& j, const std::string& path) {
  if (!j.is_number_integer()) throw ConfigError(path, "expected an integer");
  return j.get<int>();
}

std::vector<double> numbers(const json& j, const std::string& path) {
  if (!j.is_array()) throw ConfigError(path, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number(j[i], idx(path, i)));
  return out;
}

void reject_unknown(const json& j, const std::string& path, std::initializer_list<const char*> known) {
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (std::none_of(known.begin(), known.end(), [&](const char* k) { return key == k; }))
      throw ConfigError(path.empty() ? key : path + "." + key, "unknown field");
  }
}

std::pair<int, int> line_column(const std::string& text, std::size_t byte) {
  int line = 1, col = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

Output read_output(const json& j, const std::string& path) {
  static const std::pair<const char*, Output> names[] = {
      {"trajectory", Output::trajectory}, {"invariants", Output::invariants}, {"wigner", Output::wigner},
      {"conservation", Output::conservation}, {"duality", Output::duality}, {"gauge", Output::gauge},
      {"order", Output::order}, {"koopman", Output::koopman}};
  if (!j.is_string()) throw ConfigError(path, "expected a string");
  const auto s = j.get<std::string>();
  for (const auto& [name, o] : names)
    if (s == name) return o;
  throw ConfigError(path, "unknown output '" + s + "'");
}

DensityMatrix read_pure(const json& j, const std::string& path, int dim) {
  if (!j.is_object()) throw ConfigError(path, "expected {\"state\": ...} or {\"density\": ...}");
  if (j.contains("state")) return projector(read_state(j["state"], path + ".state", dim));
  if (j.contains("density")) {
    DensityMatrix rho = read_density(j["density"], path + ".density", dim);
    if (!rho.is_pure()) throw ConfigError(path + ".density", "state is not pure");
    return rho;
  }
  throw ConfigError(path, "expected a 'state' or 'density' field");
}

InitialCondition read_initial(const json& j, const std::string& path, int dim) {
  if (!j.is_object()) throw ConfigError(path, "expected an object");
  if (j.contains("state")) return read_state(j["state"], path + ".state", dim);
  if (j.contains("density")) return read_density(j["density"], path + ".density", dim);
  if (j.contains("support")) return literals::read_measure(j, path, dim);
  throw ConfigError(path, "expected a 'state', 'density' or 'support' field");
}

void read_thresholds(const json& j, const std::string& path, Thresholds& t) {
  if (!j.is_object()) throw ConfigError(path, "expected an object");
  const std::pair<const char*, double*> slots[] = {
      {"unitarity", &t.unitarity},           {"cocycle", &t.cocycle},
      {"spectrum", &t.spectrum},             {"purity", &t.purity},
      {"trace", &t.trace},                   {"linear_limit", &t.linear_limit},
      {"conservation", &t.conservation},     {"duality", &t.duality},
      {"wigner_violation", &t.wigner_violation}, {"wigner_conserved", &t.wigner_conserved},
      {"gauge_state", &t.gauge_state},       {"gauge_phase", &t.gauge_phase},
      {"order_deviation", &t.order_deviation}, {"koopman_unitarity", &t.koopman_unitarity},
      {"koopman_generator", &t.koopman_generator}};
  for (const auto& [key, value] : j.items()) {
    auto it = std::find_if(std::begin(slots), std::end(slots), [&](const auto& s) { return key == s.first; });
    if (it == std::end(slots)) throw ConfigError(path + "." + key, "unknown threshold");
    const double x = number(value, path + "." + key);
    if (!(x >= 0.0)) throw ConfigError(path + "." + key, "threshold must be nonnegative");
    *it->second = x;
  }
}

IntegratorConfig read_integrator(const json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path, "expected an object");
  reject_unknown(j, path, {"dt", "t_final", "midpoint_tol", "midpoint_max_iter", "record_stride"});
  IntegratorConfig c;
  if (j.contains("dt")) c.dt = number(j["dt"], path + ".dt");
  if (j.contains("t_final")) c.t_final = number(j["t_final"], path + ".t_final");
  if (j.contains("midpoint_tol")) c.midpoint_tol = number(j["midpoint_tol"], path + ".midpoint_tol");
  if (j.contains("midpoint_max_iter")) c.midpoint_max_iter = integer(j["midpoint_max_iter"], path + ".midpoint_max_iter");
  if (j.contains("record_stride")) c.record_stride = integer(j["record_stride"], path + ".record_stride");
  try {
    c.validate();
  } catch (const Error& e) {
    throw ConfigError(path, e.what());
  }
  return c;
}

NamedClassical read_classical(const json& j, const std::string& path) {
  if (!j.is_object() || !j.contains("name") || !j["name"].is_string())
    throw ConfigError(path, "expected an object with a 'name' string");
  const auto name = j["name"].get<std::string>();
  std::string label = j.contains("label") && j["label"].is_string() ? j["label"].get<std::string>() : name;
  if (name == "gaussian") {
    reject_unknown(j, path, {"name", "label", "q0", "p0", "width"});
    const double q0 = j.contains("q0") ? number(j["q0"], path + ".q0") : 0.0;
    const double p0 = j.contains("p0") ? number(j["p0"], path + ".p0") : 0.0;
    const double w = j.contains("width") ? number(j["width"], path + ".width") : 1.0;
    if (!(w > 0.0)) throw ConfigError(path + ".width", "must be positive");
    return {label, koopman::gaussian(q0, p0, w)};
  }
  reject_unknown(j, path, {"name", "label"});
  if (name == "q") return {label, koopman::coordinate_q()};
  if (name == "p") return {label, koopman::coordinate_p()};
  if (name == "q2") return {label, koopman::coordinate_q2()};
  throw ConfigError(path + ".name", "unknown classical observable '" + name + "'");
}

KoopmanConfig read_koopman(const json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path, "expected an object");
  reject_unknown(j, path, {"flow", "observables", "times", "half_width", "nodes", "generator_points", "generator_dt"});
  KoopmanConfig k;
  if (!j.contains("flow") || !j["flow"].is_object()) throw ConfigError(path + ".flow", "missing flow object");
  const json& flow = j["flow"];
  const std::string fp = path + ".flow";
  const std::string type = flow.contains("type") && flow["type"].is_string() ? flow["type"].get<std::string>() : "";
  if (type == "harmonic") {
    reject_unknown(flow, fp, {"type", "omega"});
    k.flow = koopman::HarmonicOscillator{flow.contains("omega") ? number(flow["omega"], fp + ".omega") : 1.0};
  } else if (type == "pendulum") {
    reject_unknown(flow, fp, {"type", "g"});
    k.flow = koopman::Pendulum{flow.contains("g") ? number(flow["g"], fp + ".g") : 1.0};
  } else {
    throw ConfigError(fp + ".type", "expected \"harmonic\" or \"pendulum\"");
  }
  if (!j.contains("observables") || !j["observables"].is_array() || j["observables"].empty())
    throw ConfigError(path + ".observables", "expected a non-empty array");
  for (std::size_t i = 0; i < j["observables"].size(); ++i)
    k.observables.push_back(read_classical(j["observables"][i], idx(path + ".observables", i)));
  if (j.contains("times")) k.times = numbers(j["times"], path + ".times");
  if (j.contains("half_width")) k.half_width = number(j["half_width"], path + ".half_width");
  if (j.contains("nodes")) k.nodes = integer(j["nodes"], path + ".nodes");
  if (!(k.half_width > 0.0)) throw ConfigError(path + ".half_width", "must be positive");
  if (k.nodes < 2) throw ConfigError(path + ".nodes", "must be at least 2");
  if (j.contains("generator_points")) {
    const json& pts = j["generator_points"];
    const std::string pp = path + ".generator_points";
    if (!pts.is_array()) throw ConfigError(pp, "expected an array of [q, p]");
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (!pts[i].is_array() || pts[i].size() != 2) throw ConfigError(idx(pp, i), "expected [q, p]");
      k.generator_points.push_back({number(pts[i][0], idx(idx(pp, i), 0)), number(pts[i][1], idx(idx(pp, i), 1))});
    }
  }
  if (j.contains("generator_dt")) k.generator_dt = number(j["generator_dt"], path + ".generator_dt");
  if (!(k.generator_dt >= 1e-6 && k.generator_dt <= 1e-3))
    throw ConfigError(path + ".generator_dt", "must lie in [1e-6, 1e-3]");
  return k;
}

}  // namespace

const char* to_string(Output o) {
  switch (o) {
    case Output::trajectory: return "trajectory";
    case Output::invariants: return "invariants";
    case Output::wigner: return "wigner";
    case Output::conservation: return "conservation";
    case Output::duality: return "duality";
    case Output::gauge: return "gauge";
    case Output::order: return "order";
    case Output::koopman: return "koopman";
  }
  return "?";
}

bool ScenarioConfig::wants(Output o) const { return std::find(outputs.begin(), outputs.end(), o) != outputs.end(); }

ScenarioConfig parse_config(const std::string& document) {
  json j;
  try {
    j = json::parse(document);
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_column(document, e.byte);
    throw ConfigError("", "malformed document at line " + std::to_string(line) + ", column " + std::to_string(col) +
                              ": " + e.what());
  }
  if (!j.is_object()) throw ConfigError("", "document must be a JSON object");
  reject_unknown(j, "", {"id", "dimension", "hamiltonian", "initial", "observables", "integrator", "outputs",
                         "wigner_pair", "wigner_expect", "conservation_times", "gauge_shifts", "order",
                         "export_cocycle", "thresholds", "koopman"});

  ScenarioConfig cfg;
  if (!j.contains("id") || !j["id"].is_string() || j["id"].get<std::string>().empty())
    throw ConfigError("id", "expected a non-empty string");
  cfg.id = j["id"].get<std::string>();
  if (cfg.id.find_first_of("/\\") != std::string::npos || cfg.id == "." || cfg.id == "..")
    throw ConfigError("id", "must be usable as a directory name");

  if (!j.contains("outputs") || !j["outputs"].is_array() || j["outputs"].empty())
    throw ConfigError("outputs", "expected a non-empty array");
  std::set<Output> seen;
  for (std::size_t i = 0; i < j["outputs"].size(); ++i) {
    const Output o = read_output(j["outputs"][i], idx("outputs", i));
    if (!seen.insert(o).second) throw ConfigError(idx("outputs", i), "duplicate output");
    cfg.outputs.push_back(o);
  }

  if (j.contains("thresholds")) read_thresholds(j["thresholds"], "thresholds", cfg.thresholds);
  if (j.contains("koopman")) cfg.koopman = read_koopman(j["koopman"], "koopman");
  if (cfg.wants(Output::koopman) && !cfg.koopman) throw ConfigError("outputs", "koopman requires a koopman section");

  const bool quantum = std::any_of(cfg.outputs.begin(), cfg.outputs.end(), [](Output o) { return o != Output::koopman; });
  if (!quantum) return cfg;

  if (!j.contains("dimension")) throw ConfigError("dimension", "missing field");
  cfg.dimension = integer(j["dimension"], "dimension");
  if (cfg.dimension < 1 || cfg.dimension > max_dimension)
    throw ConfigError("dimension", "must lie in [1, " + std::to_string(max_dimension) + "]");
  const int n = cfg.dimension;

  if (!j.contains("hamiltonian")) throw ConfigError("hamiltonian", "missing field");
  cfg.hamiltonian = literals::read_hamiltonian(j["hamiltonian"], "hamiltonian", n);
  if (!j.contains("initial")) throw ConfigError("initial", "missing field");
  cfg.initial = read_initial(j["initial"], "initial", n);

  if (j.contains("observables")) {
    const json& obs = j["observables"];
    if (!obs.is_array()) throw ConfigError("observables", "expected an array");
    for (std::size_t i = 0; i < obs.size(); ++i) {
      const std::string p = idx("observables", i);
      std::string label = "obs" + std::to_string(i);
      if (obs[i].is_object() && obs[i].contains("label")) {
        if (!obs[i]["label"].is_string()) throw ConfigError(p + ".label", "expected a string");
        label = obs[i]["label"].get<std::string>();
      }
      cfg.observables.push_back({label, literals::read_observable(obs[i], p, n)});
    }
  }

  cfg.integrator = read_integrator(j.contains("integrator") ? j["integrator"] : json::object(), "integrator");

  if (j.contains("wigner_pair")) cfg.wigner_pair = read_pure(j["wigner_pair"], "wigner_pair", n);
  cfg.wigner_expect_violation = !std::holds_alternative<LinearSpec>(*cfg.hamiltonian);
  if (j.contains("wigner_expect")) {
    const json& w = j["wigner_expect"];
    if (w == "violation")
      cfg.wigner_expect_violation = true;
    else if (w == "conserved")
      cfg.wigner_expect_violation = false;
    else
      throw ConfigError("wigner_expect", "expected \"violation\" or \"conserved\"");
  }
  cfg.conservation_times = j.contains("conservation_times") ? numbers(j["conservation_times"], "conservation_times")
                                                            : std::vector<double>{cfg.integrator.t_final};
  if (j.contains("gauge_shifts")) cfg.gauge_shifts = numbers(j["gauge_shifts"], "gauge_shifts");
  cfg.order_t_final = cfg.integrator.t_final;
  if (j.contains("order")) {
    const json& o = j["order"];
    if (!o.is_object()) throw ConfigError("order", "expected an object");
    reject_unknown(o, "order", {"t_final", "dt"});
    if (o.contains("t_final")) cfg.order_t_final = number(o["t_final"], "order.t_final");
    if (o.contains("dt")) cfg.order_dt = number(o["dt"], "order.dt");
    if (!(cfg.order_dt > 0.0)) throw ConfigError("order.dt", "must be positive");
  }
  if (j.contains("export_cocycle")) {
    if (!j["export_cocycle"].is_boolean()) throw ConfigError("export_cocycle", "expected a boolean");
    cfg.export_cocycle = j["export_cocycle"].get<bool>();
  }

  // Consistency between requested outputs and provided inputs.
  const bool is_measure = std::holds_alternative<StateMeasure>(*cfg.initial);
  if (cfg.wants(Output::wigner)) {
    if (!cfg.wigner_pair) throw ConfigError("outputs", "wigner requires wigner_pair");
    bool pure = false;
    if (std::holds_alternative<StateVector>(*cfg.initial)) pure = true;
    if (const auto* rho = std::get_if<DensityMatrix>(&*cfg.initial)) pure = rho->is_pure();
    if (!pure) throw ConfigError("initial", "wigner requires a pure initial state");
  }
  if (is_measure && cfg.wants(Output::gauge)) throw ConfigError("outputs", "gauge requires a single initial state");
  if (is_measure && cfg.wants(Output::order)) throw ConfigError("outputs", "order requires a single initial state");
  if ((cfg.wants(Output::conservation) || cfg.wants(Output::duality)) && cfg.observables.empty())
    throw ConfigError("observables", "conservation and duality require at least one observable");
  if (cfg.wants(Output::order) && !(cfg.order_t_final > 0.0))
    throw ConfigError("order.t_final", "order requires a positive t_final");
  return cfg;
}

}  // namespace eqm
