#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "eqm/scenario.hpp"

namespace eqm {

namespace {

std::string short_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", x);
  return buf;
}

class Csv {
 public:
  explicit Csv(const std::vector<std::string>& header) {
    for (std::size_t i = 0; i < header.size(); ++i) os_ << (i ? "," : "") << header[i];
    os_ << '\n';
  }
  Csv& row(const std::vector<double>& values) {
    for (std::size_t i = 0; i < values.size(); ++i) os_ << (i ? "," : "") << format_number(values[i]);
    os_ << '\n';
    return *this;
  }
  Csv& raw_row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) os_ << (i ? "," : "") << cells[i];
    os_ << '\n';
    return *this;
  }
  std::string str() const { return os_.str(); }

 private:
  std::ostringstream os_;
};

std::vector<std::string> matrix_columns(const std::string& prefix, int n) {
  std::vector<std::string> cols;
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      const std::string base = prefix + "_" + std::to_string(r) + "_" + std::to_string(c);
      cols.push_back(base + "_re");
      cols.push_back(base + "_im");
    }
  return cols;
}

void append_matrix(std::vector<double>& row, const Matrix& m) {
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      row.push_back(m(r, c).real());
      row.push_back(m(r, c).imag());
    }
}

double expectation_at(const DensityMatrix& rho, const ObservableFunction& f) { return trace_pairing(rho, f.eval(rho)); }

std::vector<DensityMatrix> initial_points(const ScenarioConfig& cfg) {
  return std::visit(
      [](const auto& init) -> std::vector<DensityMatrix> {
        using T = std::decay_t<decltype(init)>;
        if constexpr (std::is_same_v<T, StateVector>)
          return {projector(init)};
        else if constexpr (std::is_same_v<T, DensityMatrix>)
          return {init};
        else
          return init.support();
      },
      *cfg.initial);
}

StateMeasure initial_measure(const ScenarioConfig& cfg) {
  if (const auto* m = std::get_if<StateMeasure>(&*cfg.initial)) return *m;
  return StateMeasure::dirac(initial_points(cfg).front());
}

std::string trajectory_table(const Trajectory& tr, const ScenarioConfig& cfg, bool cocycle) {
  const int n = cfg.dimension;
  std::vector<std::string> header{"t"};
  for (auto& c : matrix_columns(cocycle ? "u" : "rho", n)) header.push_back(c);
  if (!cocycle) {
    header.push_back("purity");
    for (const auto& o : cfg.observables) header.push_back(o.label);
  }
  Csv csv(header);
  for (std::size_t k = 0; k < tr.times.size(); ++k) {
    std::vector<double> row{tr.times[k]};
    if (cocycle) {
      append_matrix(row, tr.cocycle[k].matrix());
    } else {
      append_matrix(row, tr.states[k].matrix());
      row.push_back(tr.states[k].purity());
      for (const auto& o : cfg.observables) row.push_back(expectation_at(tr.states[k], o.function));
    }
    csv.row(row);
  }
  return csv.str();
}

struct InvariantMaxima {
  double unitarity = 0.0;
  double cocycle = 0.0;
  double spectrum = 0.0;
  double purity = 0.0;
  double trace = 0.0;
  double linear_limit = 0.0;
};

void accumulate_invariants(const Trajectory& tr, const HamiltonianFunction& h, InvariantMaxima& m) {
  const DensityMatrix& rho0 = tr.states.front();
  const Matrix& r0 = rho0.matrix();
  const auto spec0 = spectrum(rho0);
  const double purity0 = rho0.purity();
  for (std::size_t k = 0; k < tr.times.size(); ++k) {
    const Matrix& u = tr.cocycle[k].matrix();
    const DensityMatrix& rho = tr.states[k];
    m.unitarity = std::max(m.unitarity, tr.cocycle[k].unitarity_defect());
    m.cocycle = std::max(m.cocycle, max_abs(rho.matrix() - u * r0 * u.adjoint()));
    const auto spec = spectrum(rho);
    for (std::size_t i = 0; i < spec.size(); ++i) m.spectrum = std::max(m.spectrum, std::abs(spec[i] - spec0[i]));
    m.purity = std::max(m.purity, std::abs(rho.purity() - purity0));
    m.trace = std::max(m.trace, std::abs(rho.matrix().trace().real() - 1.0));
    if (const auto& gen = h.linear_generator()) {
      const Matrix exact = linear_propagator(*gen, tr.times[k]).matrix();
      m.linear_limit = std::max(m.linear_limit, max_abs(rho.matrix() - exact * r0 * exact.adjoint()));
    }
  }
}

void run_koopman(const ScenarioConfig& cfg, ScenarioResult& out) {
  const KoopmanConfig& k = *cfg.koopman;
  const Thresholds& th = cfg.thresholds;
  const auto quad = koopman::gauss_legendre_square(k.half_width, k.nodes);
  Csv csv({"kind", "f", "g", "t", "q", "p", "value"});
  for (std::size_t i = 0; i < k.observables.size(); ++i) {
    for (std::size_t j = i; j < k.observables.size(); ++j) {
      const auto& f = k.observables[i];
      const auto& g = k.observables[j];
      for (double t : k.times) {
        const auto check = koopman::unitarity_residual(f.function, g.function, k.flow, t, quad);
        out.report.push_back(make_row(cfg.id,
                                      "koopman_unitarity[" + f.label + "," + g.label + ",t=" + short_number(t) + "]",
                                      check.residual, th.koopman_unitarity));
        if (check.mass_leak)
          out.warnings.push_back("koopman: mass leak at the domain boundary for " + f.label + "," + g.label +
                                 " at t=" + short_number(t));
        csv.raw_row({"unitarity", f.label, g.label, format_number(t), "", "", format_number(check.residual)});
      }
    }
  }
  const koopman::SymplecticFlow flow = k.flow;
  const koopman::ClassicalObservable energy("H", [flow](double q, double p) {
    return cplx(koopman::energy(flow, {q, p}), 0.0);
  });
  for (const auto& f : k.observables) {
    for (const auto& m : k.generator_points) {
      const double res = koopman::liouville_generator_residual(f.function, flow, energy, m, k.generator_dt);
      const double rel = res / (1.0 + std::abs(f.function(m)));
      out.report.push_back(make_row(
          cfg.id, "koopman_generator[" + f.label + ",q=" + short_number(m.q) + ",p=" + short_number(m.p) + "]", rel,
          th.koopman_generator));
      csv.raw_row({"generator", f.label, "", "", format_number(m.q), format_number(m.p), format_number(rel)});
    }
  }
  out.tables.push_back({"koopman", csv.str()});
}

void run_quantum(const ScenarioConfig& cfg, ScenarioResult& out) {
  const Thresholds& th = cfg.thresholds;
  const HamiltonianFunction h = build(*cfg.hamiltonian);
  const std::vector<DensityMatrix> points = initial_points(cfg);
  const bool is_measure = std::holds_alternative<StateMeasure>(*cfg.initial);

  if (cfg.wants(Output::trajectory) || cfg.wants(Output::invariants)) {
    InvariantMaxima maxima;
    std::vector<Trajectory> trajectories;
    for (const auto& rho0 : points) trajectories.push_back(evolve(h, rho0, cfg.integrator));
    for (const auto& tr : trajectories) accumulate_invariants(tr, h, maxima);

    if (cfg.wants(Output::trajectory)) {
      for (std::size_t i = 0; i < trajectories.size(); ++i) {
        const std::string suffix = is_measure ? "_" + std::to_string(i) : "";
        out.tables.push_back({"trajectory" + suffix, trajectory_table(trajectories[i], cfg, false)});
        if (cfg.export_cocycle)
          out.tables.push_back({"cocycle" + suffix, trajectory_table(trajectories[i], cfg, true)});
      }
      if (is_measure) {
        const StateMeasure omega = initial_measure(cfg);
        std::vector<std::string> header{"t"};
        for (const auto& o : cfg.observables) header.push_back(o.label);
        Csv csv(header);
        for (std::size_t k = 0; k < trajectories.front().times.size(); ++k) {
          std::vector<double> row{trajectories.front().times[k]};
          for (const auto& o : cfg.observables) {
            double sum = 0.0;
            for (std::size_t i = 0; i < trajectories.size(); ++i)
              sum += omega.weights()[i] * expectation_at(trajectories[i].states[k], o.function);
            row.push_back(sum);
          }
          csv.row(row);
        }
        out.tables.push_back({"measure_expectations", csv.str()});
      }
    }
    if (cfg.wants(Output::invariants)) {
      out.report.push_back(make_row(cfg.id, "unitarity", maxima.unitarity, th.unitarity));
      out.report.push_back(make_row(cfg.id, "cocycle_realization", maxima.cocycle, th.cocycle));
      out.report.push_back(make_row(cfg.id, "spectrum_drift", maxima.spectrum, th.spectrum));
      out.report.push_back(make_row(cfg.id, "purity_drift", maxima.purity, th.purity));
      out.report.push_back(make_row(cfg.id, "trace_drift", maxima.trace, th.trace));
      if (h.linear_generator())
        out.report.push_back(make_row(cfg.id, "linear_limit", maxima.linear_limit, th.linear_limit));
    }
  }

  if (cfg.wants(Output::wigner)) {
    const auto w = wigner_deviation(h, points.front(), *cfg.wigner_pair, cfg.integrator);
    if (cfg.wigner_expect_violation)
      out.report.push_back(
          make_row(cfg.id, "wigner_deviation", w.max_dev, th.wigner_violation, CheckKind::expected_violation));
    else
      out.report.push_back(make_row(cfg.id, "wigner_deviation", w.max_dev, th.wigner_conserved));
    Csv csv({"max_dev", "t_at_max"});
    csv.row({w.max_dev, w.t_at_max});
    out.tables.push_back({"wigner", csv.str()});
  }

  if (cfg.wants(Output::conservation)) {
    Csv csv({"observable", "t", "residual"});
    for (const auto& o : cfg.observables) {
      for (double t : cfg.conservation_times) {
        double worst = 0.0;
        for (const auto& rho : points)
          worst = std::max(worst, conservation_residual(o.function, h, rho, t, cfg.integrator));
        out.report.push_back(
            make_row(cfg.id, "conservation[" + o.label + ",t=" + short_number(t) + "]", worst, th.conservation));
        csv.raw_row({o.label, format_number(t), format_number(worst)});
      }
    }
    out.tables.push_back({"conservation", csv.str()});
  }

  if (cfg.wants(Output::duality)) {
    const StateMeasure omega = initial_measure(cfg);
    for (const auto& o : cfg.observables)
      for (double t : cfg.conservation_times)
        out.report.push_back(make_row(cfg.id, "duality[" + o.label + ",t=" + short_number(t) + "]",
                                      duality_residual(omega, o.function, h, t, cfg.integrator), th.duality));
  }

  if (cfg.wants(Output::gauge)) {
    const Trajectory base = evolve(h, points.front(), cfg.integrator);
    for (double c : cfg.gauge_shifts) {
      const Trajectory shifted = evolve(shift_differential(h, c), points.front(), cfg.integrator);
      double state_diff = 0.0, phase_diff = 0.0;
      for (std::size_t k = 0; k < base.times.size(); ++k) {
        state_diff = std::max(state_diff, max_abs(shifted.states[k].matrix() - base.states[k].matrix()));
        const cplx phase = std::polar(1.0, -c * base.times[k]);
        phase_diff = std::max(phase_diff, max_abs(shifted.cocycle[k].matrix() - phase * base.cocycle[k].matrix()));
      }
      out.report.push_back(make_row(cfg.id, "gauge_state[c=" + short_number(c) + "]", state_diff, th.gauge_state));
      out.report.push_back(make_row(cfg.id, "gauge_phase[c=" + short_number(c) + "]", phase_diff, th.gauge_phase));
    }
  }

  if (cfg.wants(Output::order)) {
    const auto r = convergence_order(h, points.front(), cfg.order_t_final, cfg.order_dt);
    out.report.push_back(
        make_row(cfg.id, "order_deviation", r.exact ? 0.0 : std::abs(r.order - 2.0), th.order_deviation));
    Csv csv({"order", "coarse_error", "fine_error", "exact"});
    csv.row({r.order, r.coarse_error, r.fine_error, r.exact ? 1.0 : 0.0});
    out.tables.push_back({"order", csv.str()});
  }
}

}  // namespace

ReportRow make_row(std::string scenario, std::string check, double value, double threshold, CheckKind kind) {
  ReportRow r{std::move(scenario), std::move(check), value, threshold, kind, false};
  r.pass = kind == CheckKind::bound ? value <= threshold : value >= threshold;
  return r;
}

std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

ScenarioResult run_scenario(const ScenarioConfig& cfg) {
  ScenarioResult out;
  try {
    const bool quantum =
        std::any_of(cfg.outputs.begin(), cfg.outputs.end(), [](Output o) { return o != Output::koopman; });
    if (quantum) run_quantum(cfg, out);
    if (cfg.wants(Output::koopman)) run_koopman(cfg, out);
  } catch (const Error& e) {
    throw ScenarioError("scenario '" + cfg.id + "': " + e.what());
  }
  return out;
}

std::string report_table(const std::vector<ReportRow>& rows) {
  std::ostringstream os;
  char line[512];
  std::snprintf(line, sizeof line, "%-24s %-44s %12s %12s  %s\n", "scenario", "check", "value", "threshold", "result");
  os << line;
  for (const auto& r : rows) {
    const char* verdict = r.kind == CheckKind::bound ? (r.pass ? "PASS" : "FAIL")
                                                     : (r.pass ? "PASS (EXPECTED-VIOLATION)" : "FAIL (EXPECTED-VIOLATION)");
    std::snprintf(line, sizeof line, "%-24s %-44s %12.4e %12.4e  %s\n", r.scenario.c_str(), r.check.c_str(), r.value,
                  r.threshold, verdict);
    os << line;
  }
  return os.str();
}

json report_json(const std::vector<ReportRow>& rows) {
  json out = json::array();
  for (const auto& r : rows) {
    out.push_back({{"scenario", r.scenario},
                   {"check", r.check},
                   {"value", r.value},
                   {"threshold", r.threshold},
                   {"kind", r.kind == CheckKind::bound ? "bound" : "expected_violation"},
                   {"pass", r.pass}});
  }
  return out;
}

void write_outputs(const std::string& out_dir, const std::string& id, const ScenarioResult& result) {
  namespace fs = std::filesystem;
  const fs::path dir = fs::path(out_dir) / id;
  fs::create_directories(dir);
  for (const auto& t : result.tables) {
    std::ofstream f(dir / (t.name + ".csv"), std::ios::binary);
    f << t.content;
    if (!f) throw Error("cannot write " + (dir / (t.name + ".csv")).string());
  }
  std::ofstream f(dir / "report.json", std::ios::binary);
  f << report_json(result.report).dump(2) << '\n';
  if (!f) throw Error("cannot write " + (dir / "report.json").string());
}

SuiteOutcome run_suite(const std::vector<CorpusEntry>& corpus, const SuiteOptions& options) {
  SuiteOutcome outcome;
  std::vector<ScenarioConfig> configs;
  for (const auto& entry : corpus) {
    try {
      ScenarioConfig cfg = parse_config(entry.document);
      if (options.dt_override) {
        cfg.integrator.dt = *options.dt_override;
        try {
          cfg.integrator.validate();
        } catch (const Error& e) {
          throw ConfigError("integrator.dt", e.what());
        }
      }
      configs.push_back(std::move(cfg));
    } catch (const ConfigError& e) {
      outcome.errors.push_back(entry.name + ": " + e.what());
    }
  }
  if (!outcome.errors.empty()) {
    outcome.exit_code = 2;
    return outcome;
  }
  for (const auto& cfg : configs) {
    try {
      ScenarioResult result = run_scenario(cfg);
      if (options.out_dir) write_outputs(*options.out_dir, cfg.id, result);
      for (auto& w : result.warnings) outcome.warnings.push_back("scenario '" + cfg.id + "': " + w);
      outcome.report.insert(outcome.report.end(), result.report.begin(), result.report.end());
    } catch (const Error& e) {
      outcome.errors.push_back(e.what());
      outcome.exit_code = 1;
    }
  }
  if (options.out_dir) {
    std::filesystem::create_directories(*options.out_dir);
    std::ofstream f(std::filesystem::path(*options.out_dir) / "report.json", std::ios::binary);
    f << report_json(outcome.report).dump(2) << '\n';
  }
  for (const auto& r : outcome.report)
    if (!r.pass) outcome.exit_code = 1;
  return outcome;
}

}  // namespace eqm
