#include "eqm/flow.hpp"

#include <cmath>
#include <sstream>

namespace eqm {

namespace {

int step_count(double t, double dt) {
  const double ratio = std::abs(t) / dt;
  // t = k dt gives exactly k steps despite roundoff in t / dt.
  const double n = std::ceil(ratio - 1e-9);
  if (n > 1e9) throw InvariantViolation("integration needs more than 1e9 steps");
  return static_cast<int>(n);
}

}  // namespace

void IntegratorConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InvariantViolation("integrator: dt must be positive");
  if (!(t_final >= 0.0) || !std::isfinite(t_final)) throw InvariantViolation("integrator: t_final must be >= 0");
  if (t_final > 0.0 && dt > t_final) throw InvariantViolation("integrator: dt exceeds t_final");
  if (!(midpoint_tol > 0.0)) throw InvariantViolation("integrator: midpoint_tol must be positive");
  if (midpoint_max_iter < 1) throw InvariantViolation("integrator: midpoint_max_iter must be >= 1");
  if (record_stride < 1) throw InvariantViolation("integrator: record_stride must be >= 1");
}

StepResult step(const HamiltonianFunction& h, const DensityMatrix& rho, const UnitaryOperator& u, double dt,
                const IntegratorConfig& cfg) {
  if (std::abs(dt) > cfg.dt * (1.0 + 1e-12))
    throw InvariantViolation("step: |dt| exceeds the configured time step");
  HermitianOperator generator = h.differential(rho);
  int iter = 0;
  for (;;) {
    if (iter == cfg.midpoint_max_iter) {
      std::ostringstream os;
      os << "midpoint fixed point did not converge in " << cfg.midpoint_max_iter
         << " iterations (dt = " << dt << "); reduce dt";
      throw ConvergenceFailure(os.str());
    }
    ++iter;
    const DensityMatrix mid = conjugate(unitary_exponential(generator, 0.5 * dt), rho);
    HermitianOperator next = h.differential(mid);
    const double change = max_abs(next.matrix() - generator.matrix());
    generator = std::move(next);
    if (change < cfg.midpoint_tol) break;
  }
  const UnitaryOperator v = unitary_exponential(generator, dt);
  return {conjugate(v, rho), v * u, iter};
}

Trajectory evolve(const HamiltonianFunction& h, const DensityMatrix& rho0, const IntegratorConfig& cfg) {
  cfg.validate();
  Trajectory out;
  UnitaryOperator u = UnitaryOperator::identity(rho0.dim());
  DensityMatrix rho = rho0;
  out.times.push_back(0.0);
  out.states.push_back(rho);
  out.cocycle.push_back(u);
  if (cfg.t_final == 0.0) return out;

  const int n = step_count(cfg.t_final, cfg.dt);
  const double dt = cfg.t_final / n;
  for (int k = 1; k <= n; ++k) {
    StepResult r = step(h, rho, u, dt, cfg);
    rho = std::move(r.state);
    u = std::move(r.cocycle);
    if (k % cfg.record_stride == 0 || k == n) {
      out.times.push_back(k == n ? cfg.t_final : k * dt);
      out.states.push_back(rho);
      out.cocycle.push_back(u);
    }
  }
  return out;
}

FlowPoint propagate(const HamiltonianFunction& h, const DensityMatrix& rho, double t, const IntegratorConfig& cfg) {
  if (!std::isfinite(t)) throw InvariantViolation("propagate: non-finite time");
  if (!(cfg.dt > 0.0)) throw InvariantViolation("integrator: dt must be positive");
  FlowPoint out{rho, UnitaryOperator::identity(rho.dim())};
  if (t == 0.0) return out;
  const int n = step_count(t, cfg.dt);
  const double dt = t / n;
  for (int k = 0; k < n; ++k) {
    StepResult r = step(h, out.state, out.cocycle, dt, cfg);
    out.state = std::move(r.state);
    out.cocycle = std::move(r.cocycle);
  }
  return out;
}

UnitaryOperator linear_propagator(const HermitianOperator& hamiltonian, double t) {
  return unitary_exponential(hamiltonian, t);
}

WignerDeviation wigner_deviation(const HamiltonianFunction& h, const DensityMatrix& p, const DensityMatrix& q,
                                 const IntegratorConfig& cfg) {
  const double initial = transition_probability(p, q);
  const Trajectory tp = evolve(h, p, cfg);
  const Trajectory tq = evolve(h, q, cfg);
  WignerDeviation out;
  for (std::size_t k = 0; k < tp.times.size(); ++k) {
    const double now = (tp.states[k].matrix().transpose().cwiseProduct(tq.states[k].matrix())).sum().real();
    const double dev = std::abs(now - initial);
    if (dev > out.max_dev) {
      out.max_dev = dev;
      out.t_at_max = tp.times[k];
    }
  }
  return out;
}

ConvergenceReport convergence_order(const HamiltonianFunction& h, const DensityMatrix& rho0, double t_final,
                                    double dt) {
  auto endpoint = [&](double step_size) {
    IntegratorConfig cfg;
    cfg.dt = step_size;
    cfg.t_final = t_final;
    cfg.validate();
    return propagate(h, rho0, t_final, cfg).state.matrix();
  };
  const Matrix coarse = endpoint(dt);
  const Matrix mid = endpoint(dt / 2);
  const Matrix fine = endpoint(dt / 4);
  ConvergenceReport out;
  out.coarse_error = (coarse - mid).norm();
  out.fine_error = (mid - fine).norm();
  out.exact = out.coarse_error < 1e-12 && out.fine_error < 1e-12;
  if (!out.exact) out.order = std::log2(out.coarse_error / out.fine_error);
  return out;
}

}  // namespace eqm
