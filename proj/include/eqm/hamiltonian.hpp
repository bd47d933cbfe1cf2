#ifndef EQM_HAMILTONIAN_HPP
#define EQM_HAMILTONIAN_HPP

// Real functions on the density-matrix space together with their
// differentials D_rho h, which are Hermitian operators under the trace
// pairing. The differential of a Hamiltonian function is the generator of
// the state-dependent unitary flow in flow.hpp.

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "eqm/hilbert.hpp"

namespace eqm {

/// h(rho) = Tr(rho A).
struct LinearSpec {
  HermitianOperator a;
};

/// h(rho) = Tr(rho A) + (lambda/2) Tr(rho B)^2.
struct MeanFieldSpec {
  HermitianOperator a;
  HermitianOperator b;
  double lambda = 0.0;
};

struct PolynomialTerm {
  double coefficient = 0.0;
  std::vector<HermitianOperator> factors;
};

/// h(rho) = sum_k c_k prod_i Tr(rho F_ki). A term without factors is a constant.
struct PolynomialSpec {
  int dim = 0;
  std::vector<PolynomialTerm> terms;
};

using HamiltonianSpec = std::variant<LinearSpec, MeanFieldSpec, PolynomialSpec>;

class HamiltonianFunction {
 public:
  /// Both maps act on Hermitian matrices; value must be real.
  using ValueMap = std::function<double(const Matrix&)>;
  using DifferentialMap = std::function<Matrix(const Matrix&)>;

  HamiltonianFunction(std::string label, int dim, ValueMap value, DifferentialMap differential);

  const std::string& label() const { return label_; }
  int dim() const { return dim_; }

  double value(const DensityMatrix& rho) const;
  HermitianOperator differential(const DensityMatrix& rho) const;

  /// For the Linear family: the constant generator A. Empty otherwise.
  const std::optional<HermitianOperator>& linear_generator() const { return linear_; }

 private:
  std::string label_;
  int dim_;
  ValueMap value_;
  DifferentialMap differential_;
  std::optional<HermitianOperator> linear_;

  friend HamiltonianFunction build(const HamiltonianSpec& spec);
  friend HamiltonianFunction shift_differential(const HamiltonianFunction& h, double c);
  friend HamiltonianFunction combine(double a, const HamiltonianFunction& f, double b,
                                     const HamiltonianFunction& g);
};

/// Closed-form value and differential for the built-in families:
///   Linear     D h = A
///   MeanField  D h = A + lambda Tr(rho B) B
///   Polynomial D h = sum_k c_k sum_j (prod_{i != j} Tr(rho F_ki)) F_kj
HamiltonianFunction build(const HamiltonianSpec& spec);

/// Function known only through its values. The differential is assembled
/// from central differences (step 1e-5) along an orthonormal basis of the
/// N^2 - 1 traceless Hermitian matrices, so it is the traceless
/// representative and costs 2(N^2 - 1) evaluations. The map must accept any
/// Hermitian matrix near the density-matrix space. Roundoff in the
/// differential is around 1e-11, so integrate with midpoint_tol above that.
HamiltonianFunction from_value(std::string label, int dim, HamiltonianFunction::ValueMap value);

/// a f + b g.
HamiltonianFunction combine(double a, const HamiltonianFunction& f, double b, const HamiltonianFunction& g);

/// {f, h}(rho) = i Tr(rho [D f, D h]).
double poisson_bracket(const HamiltonianFunction& f, const HamiltonianFunction& h, const DensityMatrix& rho);

/// |(h(rho + eps d) - h(rho - eps d)) / (2 eps) - Tr(d D h)| for traceless Hermitian d.
/// Throws InvariantViolation if rho +- eps d is not a density matrix, or if
/// d is not traceless, or eps lies outside [1e-7, 1e-3].
double fd_differential_residual(const HamiltonianFunction& h, const DensityMatrix& rho,
                                const HermitianOperator& direction, double eps);

/// h + c Tr(rho): value shifted by c on the unit-trace space, differential by c 1.
HamiltonianFunction shift_differential(const HamiltonianFunction& h, double c);

/// Orthonormal basis (Tr(E_j E_k) = delta_jk) of traceless Hermitian N x N matrices.
std::vector<HermitianOperator> traceless_basis(int n);

}  // namespace eqm

#endif  // EQM_HAMILTONIAN_HPP
