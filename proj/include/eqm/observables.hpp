#ifndef EQM_OBSERVABLES_HPP
#define EQM_OBSERVABLES_HPP

// Operator-valued functions on the density-matrix space and the action of a
// nonlinear flow on them:
//
//   (Phi^T_t f)(rho) = u(t, rho)^dagger f(Phi_t rho) u(t, rho)
//
// This map is linear in f, unital and multiplicative, so the nonlinear flow
// acts by automorphisms. States are finitely supported probability measures
// on density matrices, omega(f) = sum_i w_i Tr(rho_i f(rho_i)).

#include <functional>
#include <string>
#include <vector>

#include "eqm/flow.hpp"
#include "eqm/hamiltonian.hpp"
#include "eqm/hilbert.hpp"

namespace eqm {

class ObservableFunction {
 public:
  using Map = std::function<HermitianOperator(const DensityMatrix&)>;

  ObservableFunction(std::string label, int dim, Map map);

  const std::string& label() const { return label_; }
  int dim() const { return dim_; }
  HermitianOperator eval(const DensityMatrix& rho) const;

 private:
  std::string label_;
  int dim_;
  Map map_;
};

/// rho -> A.
ObservableFunction constant_observable(const HermitianOperator& a);

/// rho -> Tr(rho B) A.
ObservableFunction trace_scaled_observable(const HermitianOperator& b, const HermitianOperator& a);

/// alpha f + beta g, pointwise.
ObservableFunction combine(double alpha, const ObservableFunction& f, double beta, const ObservableFunction& g);

/// Lazy Phi^T_t f: each evaluation integrates the cocycle from its argument.
/// Negative t integrates backward.
ObservableFunction heisenberg_transform(const ObservableFunction& f, const HamiltonianFunction& h, double t,
                                        const IntegratorConfig& cfg);

class StateMeasure {
 public:
  /// Nonempty support of equal dimensions; weights nonnegative, summing to 1 within 1e-12.
  StateMeasure(std::vector<DensityMatrix> support, std::vector<double> weights);

  static StateMeasure dirac(const DensityMatrix& rho);

  int dim() const { return support_.front().dim(); }
  const std::vector<DensityMatrix>& support() const { return support_; }
  const std::vector<double>& weights() const { return weights_; }

  /// Elementary mixture at the barycentre, sum_i w_i rho_i.
  DensityMatrix barycenter() const;

 private:
  std::vector<DensityMatrix> support_;
  std::vector<double> weights_;
};

/// omega(f) = sum_i w_i Tr(rho_i f(rho_i)).
double expectation(const StateMeasure& omega, const ObservableFunction& f);

/// Evolves every support point under the flow and keeps the weights.
StateMeasure pushforward_state(const StateMeasure& omega, const HamiltonianFunction& h, double t,
                               const IntegratorConfig& cfg);

/// |expectation(pushforward(omega), f) - expectation(omega, Phi^T_t f)|.
double duality_residual(const StateMeasure& omega, const ObservableFunction& f, const HamiltonianFunction& h,
                        double t, const IntegratorConfig& cfg);

/// |Tr(Phi_t rho (Phi^T_{-t} f)(Phi_t rho)) - Tr(rho f(rho))|, zero in the continuum.
double conservation_residual(const ObservableFunction& f, const HamiltonianFunction& h, const DensityMatrix& rho,
                             double t, const IntegratorConfig& cfg);

}  // namespace eqm

#endif  // EQM_OBSERVABLES_HPP
