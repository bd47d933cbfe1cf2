#include "eqm/observables.hpp"

#include <cmath>
#include <sstream>

namespace eqm {

namespace {

void require_dim(int expected, int got, const char* what) {
  if (expected != got) {
    std::ostringstream os;
    os << what << ": dimension " << got << " does not match " << expected;
    throw DimensionMismatch(os.str());
  }
}

}  // namespace

ObservableFunction::ObservableFunction(std::string label, int dim, Map map)
    : label_(std::move(label)), dim_(dim), map_(std::move(map)) {
  if (dim_ < 1 || dim_ > max_dimension) throw DimensionMismatch("ObservableFunction: bad dimension");
  if (!map_) throw InvariantViolation("ObservableFunction: empty map");
}

HermitianOperator ObservableFunction::eval(const DensityMatrix& rho) const {
  require_dim(dim_, rho.dim(), "ObservableFunction::eval");
  HermitianOperator out = map_(rho);
  require_dim(dim_, out.dim(), "ObservableFunction value");
  return out;
}

ObservableFunction constant_observable(const HermitianOperator& a) {
  return ObservableFunction("constant", a.dim(), [a](const DensityMatrix&) { return a; });
}

ObservableFunction trace_scaled_observable(const HermitianOperator& b, const HermitianOperator& a) {
  require_dim(a.dim(), b.dim(), "trace_scaled_observable");
  return ObservableFunction("trace_scaled", a.dim(),
                            [a, b](const DensityMatrix& rho) { return trace_pairing(rho, b) * a; });
}

ObservableFunction combine(double alpha, const ObservableFunction& f, double beta, const ObservableFunction& g) {
  require_dim(f.dim(), g.dim(), "combine");
  return ObservableFunction(f.label() + "+" + g.label(), f.dim(), [alpha, beta, f, g](const DensityMatrix& rho) {
    return alpha * f.eval(rho) + beta * g.eval(rho);
  });
}

ObservableFunction heisenberg_transform(const ObservableFunction& f, const HamiltonianFunction& h, double t,
                                        const IntegratorConfig& cfg) {
  require_dim(f.dim(), h.dim(), "heisenberg_transform");
  if (t == 0.0) return f;
  return ObservableFunction("heisenberg(" + f.label() + ")", f.dim(), [f, h, t, cfg](const DensityMatrix& rho) {
    const FlowPoint end = propagate(h, rho, t, cfg);
    const Matrix& u = end.cocycle.matrix();
    return HermitianOperator::hermitian_part(u.adjoint() * f.eval(end.state).matrix() * u);
  });
}

StateMeasure::StateMeasure(std::vector<DensityMatrix> support, std::vector<double> weights)
    : support_(std::move(support)), weights_(std::move(weights)) {
  if (support_.empty()) throw InvariantViolation("StateMeasure: empty support");
  if (support_.size() != weights_.size()) throw InvariantViolation("StateMeasure: support and weights differ in length");
  double total = 0.0;
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    require_dim(support_.front().dim(), support_[i].dim(), "StateMeasure support");
    if (!(weights_[i] >= 0.0) || !std::isfinite(weights_[i]))
      throw InvariantViolation("StateMeasure: weight " + std::to_string(i) + " is negative or non-finite");
    total += weights_[i];
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw InvariantViolation("StateMeasure: weights sum to " + std::to_string(total) + ", expected 1");
}

StateMeasure StateMeasure::dirac(const DensityMatrix& rho) { return StateMeasure({rho}, {1.0}); }

DensityMatrix StateMeasure::barycenter() const {
  Matrix m = Matrix::Zero(dim(), dim());
  for (std::size_t i = 0; i < support_.size(); ++i) m += weights_[i] * support_[i].matrix();
  return renormalize(m);
}

double expectation(const StateMeasure& omega, const ObservableFunction& f) {
  require_dim(omega.dim(), f.dim(), "expectation");
  double sum = 0.0;
  for (std::size_t i = 0; i < omega.support().size(); ++i) {
    const DensityMatrix& rho = omega.support()[i];
    sum += omega.weights()[i] * trace_pairing(rho, f.eval(rho));
  }
  return sum;
}

StateMeasure pushforward_state(const StateMeasure& omega, const HamiltonianFunction& h, double t,
                               const IntegratorConfig& cfg) {
  require_dim(omega.dim(), h.dim(), "pushforward_state");
  std::vector<DensityMatrix> moved;
  moved.reserve(omega.support().size());
  for (const auto& rho : omega.support()) moved.push_back(propagate(h, rho, t, cfg).state);
  return StateMeasure(std::move(moved), omega.weights());
}

double duality_residual(const StateMeasure& omega, const ObservableFunction& f, const HamiltonianFunction& h,
                        double t, const IntegratorConfig& cfg) {
  const double schroedinger = expectation(pushforward_state(omega, h, t, cfg), f);
  const double heisenberg = expectation(omega, heisenberg_transform(f, h, t, cfg));
  return std::abs(schroedinger - heisenberg);
}

double conservation_residual(const ObservableFunction& f, const HamiltonianFunction& h, const DensityMatrix& rho,
                             double t, const IntegratorConfig& cfg) {
  require_dim(f.dim(), rho.dim(), "conservation_residual");
  if (t == 0.0) return 0.0;
  const DensityMatrix moved = propagate(h, rho, t, cfg).state;
  const HermitianOperator pulled_back = heisenberg_transform(f, h, -t, cfg).eval(moved);
  return std::abs(trace_pairing(moved, pulled_back) - trace_pairing(rho, f.eval(rho)));
}

}  // namespace eqm
