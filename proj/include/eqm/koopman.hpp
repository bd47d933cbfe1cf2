#ifndef EQM_KOOPMAN_HPP
#define EQM_KOOPMAN_HPP

// Koopman lift of a one-degree-of-freedom symplectic flow: the composition
// operator (U_t f)(m) = f(phi_t(m)) on L^2 of the (q, p) plane. Integrals
// use a tensor Gauss-Legendre rule on [-L, L]^2 and observables are
// evaluated at transported nodes, never interpolated.

#include <complex>
#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "eqm/hilbert.hpp"

namespace eqm::koopman {

struct PhasePoint {
  double q = 0.0;
  double p = 0.0;
};

/// H = omega (q^2 + p^2) / 2, flowed exactly as a rotation.
struct HarmonicOscillator {
  double omega = 1.0;
};

/// H = p^2 / 2 - g cos q, flowed by kick-drift-kick leapfrog.
struct Pendulum {
  double g = 1.0;
};

using SymplecticFlow = std::variant<HarmonicOscillator, Pendulum>;

inline constexpr double pendulum_step = 1e-4;

/// phi_t(m) for signed t.
PhasePoint advance(const SymplecticFlow& flow, PhasePoint m, double t);

/// Value of the flow's Hamiltonian at m.
double energy(const SymplecticFlow& flow, PhasePoint m);

class ClassicalObservable {
 public:
  using Map = std::function<cplx(double q, double p)>;

  ClassicalObservable(std::string label, Map map);

  const std::string& label() const { return label_; }
  cplx operator()(double q, double p) const { return map_(q, p); }
  cplx operator()(PhasePoint m) const { return map_(m.q, m.p); }

 private:
  std::string label_;
  Map map_;
};

/// exp(-((q - q0)^2 + (p - p0)^2) / (2 width^2)).
ClassicalObservable gaussian(double q0 = 0.0, double p0 = 0.0, double width = 1.0);
ClassicalObservable coordinate_q();
ClassicalObservable coordinate_p();
ClassicalObservable coordinate_q2();
ClassicalObservable constant(cplx c);

struct Quadrature {
  std::vector<PhasePoint> nodes;
  std::vector<double> weights;
  double half_width = 0.0;
  int nodes_per_axis = 0;
};

/// Tensor Gauss-Legendre grid on [-half_width, half_width]^2, row-major in q.
Quadrature gauss_legendre_square(double half_width = 6.0, int nodes_per_axis = 64);

/// m -> f(phi_t(m)).
ClassicalObservable compose(const ClassicalObservable& f, const SymplecticFlow& flow, double t);

/// <f, g> = sum_i w_i f(m_i) conj(g(m_i)), pairwise summed in node order.
/// Throws InvariantViolation on a non-finite node value.
cplx inner_product(const ClassicalObservable& f, const ClassicalObservable& g, const Quadrature& quad);

struct UnitarityCheck {
  double residual = 0.0;
  /// Some transported observable exceeds 1e-8 on the outermost ring of nodes.
  bool mass_leak = false;
};

/// |<U_t f, U_t g> - <f, g>| with U_t f evaluated at transported nodes.
UnitarityCheck unitarity_residual(const ClassicalObservable& f, const ClassicalObservable& g,
                                  const SymplecticFlow& flow, double t, const Quadrature& quad);

/// |(f(phi_dt m) - f(phi_-dt m)) / (2 dt) - {f, H}(m)| where
/// {f, H} = f_q H_p - f_p H_q from central differences with step 1e-5.
/// Throws InvariantViolation unless dt lies in [1e-6, 1e-3].
double liouville_generator_residual(const ClassicalObservable& f, const SymplecticFlow& flow,
                                    const ClassicalObservable& hamiltonian, PhasePoint m, double dt);

}  // namespace eqm::koopman

#endif  // EQM_KOOPMAN_HPP
