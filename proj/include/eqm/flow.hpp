#ifndef EQM_FLOW_HPP
#define EQM_FLOW_HPP

// Nonlinear density-matrix flow rho_t = u(t, rho) rho u(t, rho)^dagger,
// where the unitary cocycle solves i du/dt = D_{rho_t}h u with u(0) = 1.
//
// Integration is by the exponential midpoint rule with a self-consistent
// midpoint state. Every step multiplies u by the exponential of a Hermitian
// matrix, so u stays unitary up to roundoff. Drift is reported, never
// corrected.

#include <vector>

#include "eqm/hamiltonian.hpp"
#include "eqm/hilbert.hpp"

namespace eqm {

class ConvergenceFailure : public Error {
 public:
  using Error::Error;
};

struct IntegratorConfig {
  double dt = 1e-3;
  double t_final = 0.0;
  double midpoint_tol = 1e-12;
  int midpoint_max_iter = 50;
  int record_stride = 1;

  /// Throws InvariantViolation on dt <= 0, t_final < 0, dt > t_final > 0,
  /// non-positive tolerance or iteration cap, or record_stride < 1.
  void validate() const;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<DensityMatrix> states;
  std::vector<UnitaryOperator> cocycle;
};

/// Flow endpoint: Phi_t(rho) and u(t, rho).
struct FlowPoint {
  DensityMatrix state;
  UnitaryOperator cocycle;
};

struct StepResult {
  DensityMatrix state;
  UnitaryOperator cocycle;
  int iterations = 0;
};

/// One exponential-midpoint step of signed length dt, |dt| <= cfg.dt:
///   G = D_{rho_mid}h with rho_mid = e^{-i dt/2 G} rho e^{i dt/2 G} (fixed point),
///   rho' = e^{-i dt G} rho e^{i dt G},  u' = e^{-i dt G} u.
/// Throws ConvergenceFailure if successive generators still differ by more
/// than cfg.midpoint_tol after cfg.midpoint_max_iter iterations.
StepResult step(const HamiltonianFunction& h, const DensityMatrix& rho, const UnitaryOperator& u, double dt,
                const IntegratorConfig& cfg);

/// Records (t, Phi_t rho0, u(t, rho0)) every record_stride steps, plus t = 0
/// and t = t_final. The step size is t_final / ceil(t_final / dt), which is
/// cfg.dt whenever t_final is a multiple of it.
Trajectory evolve(const HamiltonianFunction& h, const DensityMatrix& rho0, const IntegratorConfig& cfg);

/// Endpoint of the flow for signed t. Negative t integrates backward, so
/// u(-t, Phi_t rho) u(t, rho) = 1 holds up to integration error.
FlowPoint propagate(const HamiltonianFunction& h, const DensityMatrix& rho, double t, const IntegratorConfig& cfg);

/// e^{-itH}.
UnitaryOperator linear_propagator(const HermitianOperator& hamiltonian, double t);

struct WignerDeviation {
  double max_dev = 0.0;
  double t_at_max = 0.0;
};

/// max over recorded t of |Tr(Phi_t(P) Phi_t(Q)) - Tr(PQ)|, with P and Q
/// evolved as independent initial conditions of the same flow.
WignerDeviation wigner_deviation(const HamiltonianFunction& h, const DensityMatrix& p, const DensityMatrix& q,
                                 const IntegratorConfig& cfg);

struct ConvergenceReport {
  double order = 0.0;         // log2(coarse_error / fine_error); 0 when exact
  double coarse_error = 0.0;  // |rho(dt) - rho(dt/2)|_F at t_final
  double fine_error = 0.0;    // |rho(dt/2) - rho(dt/4)|_F at t_final
  bool exact = false;         // both errors below 1e-12
};

/// Self-convergence estimate from runs at dt, dt/2 and dt/4.
ConvergenceReport convergence_order(const HamiltonianFunction& h, const DensityMatrix& rho0, double t_final,
                                    double dt = 0.01);

}  // namespace eqm

#endif  // EQM_FLOW_HPP
