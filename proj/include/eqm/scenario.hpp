#ifndef EQM_SCENARIO_HPP
#define EQM_SCENARIO_HPP

// Batch front end: scenario documents in, CSV tables and check reports out.
//
// A scenario document is a JSON object:
//
//   id           text, used in file names and error messages
//   dimension    N
//   hamiltonian  hamiltonian literal (see literals.hpp)
//   initial      {"state": V} | {"density": M} | measure literal
//   observables  [{"label": text, ...observable literal}, ...]
//   integrator   {"dt", "t_final", "midpoint_tol", "midpoint_max_iter", "record_stride"}
//   outputs      subset of trajectory, invariants, wigner, conservation,
//                duality, gauge, order, koopman
//   wigner_pair  {"state": V} | {"density": M}, pure
//   wigner_expect            "violation" | "conserved"
//   conservation_times       [t, ...]        default [t_final]
//   gauge_shifts             [c, ...]        default [-10, 1, 10]
//   order        {"t_final": t, "dt": dt}    default t_final, 0.01
//   export_cocycle           bool
//   thresholds   {name: value}, overriding Thresholds below
//   koopman      {"flow": {"type": "harmonic", "omega": w} | {"type": "pendulum", "g": g},
//                 "observables": [{"name": "gaussian", "q0", "p0", "width"} | {"name": "q" | "p" | "q2"}],
//                 "times": [t, ...], "half_width": L, "nodes": n,
//                 "generator_points": [[q, p], ...], "generator_dt": dt}
//
// A document whose outputs are exactly ["koopman"] needs no quantum fields.

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "eqm/flow.hpp"
#include "eqm/hamiltonian.hpp"
#include "eqm/hilbert.hpp"
#include "eqm/koopman.hpp"
#include "eqm/literals.hpp"
#include "eqm/observables.hpp"

namespace eqm {

enum class Output { trajectory, invariants, wigner, conservation, duality, gauge, order, koopman };

const char* to_string(Output o);

/// Check thresholds; every field can be overridden from the document.
struct Thresholds {
  double unitarity = 1e-10;
  double cocycle = 1e-10;
  double spectrum = 1e-9;
  double purity = 1e-9;
  double trace = 1e-11;
  double linear_limit = 1e-8;
  double conservation = 1e-8;
  double duality = 1e-8;
  double wigner_violation = 0.01;  // lower bound
  double wigner_conserved = 1e-8;
  double gauge_state = 1e-10;
  double gauge_phase = 1e-9;
  double order_deviation = 0.2;    // |order - 2|
  double koopman_unitarity = 1e-6;
  double koopman_generator = 1e-5;
};

struct NamedObservable {
  std::string label;
  ObservableFunction function;
};

struct NamedClassical {
  std::string label;
  koopman::ClassicalObservable function;
};

struct KoopmanConfig {
  koopman::SymplecticFlow flow;
  std::vector<NamedClassical> observables;
  std::vector<double> times;
  double half_width = 6.0;
  int nodes = 64;
  std::vector<koopman::PhasePoint> generator_points;
  double generator_dt = 1e-4;
};

using InitialCondition = std::variant<StateVector, DensityMatrix, StateMeasure>;

struct ScenarioConfig {
  std::string id;
  int dimension = 0;
  std::optional<HamiltonianSpec> hamiltonian;
  std::optional<InitialCondition> initial;
  std::vector<NamedObservable> observables;
  IntegratorConfig integrator;
  std::vector<Output> outputs;
  std::optional<DensityMatrix> wigner_pair;
  bool wigner_expect_violation = true;
  std::vector<double> conservation_times;
  std::vector<double> gauge_shifts{-10.0, 1.0, 10.0};
  double order_t_final = 0.0;
  double order_dt = 0.01;
  bool export_cocycle = false;
  Thresholds thresholds;
  std::optional<KoopmanConfig> koopman;

  bool wants(Output o) const;
};

enum class CheckKind {
  bound,               // pass iff value <= threshold
  expected_violation,  // pass iff value >= threshold
};

struct ReportRow {
  std::string scenario;
  std::string check;
  double value = 0.0;
  double threshold = 0.0;
  CheckKind kind = CheckKind::bound;
  bool pass = false;
};

ReportRow make_row(std::string scenario, std::string check, double value, double threshold,
                   CheckKind kind = CheckKind::bound);

struct CsvTable {
  std::string name;  // file stem
  std::string content;
};

struct ScenarioResult {
  std::vector<CsvTable> tables;
  std::vector<ReportRow> report;
  std::vector<std::string> warnings;
};

/// Computational failure inside a scenario; the message starts with the scenario id.
class ScenarioError : public Error {
 public:
  using Error::Error;
};

/// Parses and validates a document; all matrix invariants are checked here.
/// Malformed JSON is reported with line and column.
ScenarioConfig parse_config(const std::string& document);

/// Runs every requested output. Deterministic for a fixed config.
ScenarioResult run_scenario(const ScenarioConfig& cfg);

/// Formats a double with 17 significant digits.
std::string format_number(double x);

std::string report_table(const std::vector<ReportRow>& rows);
json report_json(const std::vector<ReportRow>& rows);

struct CorpusEntry {
  std::string name;
  std::string document;
};

/// Scenario documents shipped with the library.
const std::vector<CorpusEntry>& bundled_corpus();

struct SuiteOptions {
  std::optional<double> dt_override;
  std::optional<std::string> out_dir;  // write tables and report when set
};

struct SuiteOutcome {
  int exit_code = 0;  // 0 all pass, 1 check failure or computational error, 2 config error
  std::vector<ReportRow> report;
  std::vector<std::string> errors;
  std::vector<std::string> warnings;
};

/// Parses every document before running any, so a config error stops the
/// suite before integration starts.
SuiteOutcome run_suite(const std::vector<CorpusEntry>& corpus, const SuiteOptions& options);

/// Writes <out_dir>/<id>/<table>.csv and <out_dir>/<id>/report.json.
void write_outputs(const std::string& out_dir, const std::string& id, const ScenarioResult& result);

}  // namespace eqm

#endif  // EQM_SCENARIO_HPP
