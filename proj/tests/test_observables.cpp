#include "doctest.h"

#include <cmath>

#include "eqm/observables.hpp"
#include "support.hpp"

using namespace eqm;
using eqm::testing::I;
using eqm::testing::max_entry;
using eqm::testing::Sampler;

namespace {

HermitianOperator op(const Matrix& m) { return HermitianOperator(m); }

DensityMatrix basis_state(int n, int k) {
  Matrix m = Matrix::Zero(n, n);
  m(k, k) = 1.0;
  return DensityMatrix(m);
}

StateVector ket(cplx a, cplx b) {
  Vector v(2);
  v << a, b;
  return StateVector(v);
}

IntegratorConfig config(double dt = 1e-3) {
  IntegratorConfig c;
  c.dt = dt;
  return c;
}

double tr(const Matrix& rho, const Matrix& a) { return (rho * a).trace().real(); }

/// A Hamiltonian and an observable, cycling through the built-in families with k.
struct Draw {
  HamiltonianFunction h;
  ObservableFunction f;
};

Draw random_draw(Sampler& s, int n, int k) {
  HamiltonianFunction h = k % 2 == 0 ? build(LinearSpec{s.hermitian(n)})
                                     : build(MeanFieldSpec{s.hermitian(n), s.hermitian(n), s.uniform(-1.0, 1.0)});
  ObservableFunction f = (k / 2) % 2 == 0 ? constant_observable(s.hermitian(n))
                                          : trace_scaled_observable(s.hermitian(n), s.hermitian(n));
  return {h, f};
}

}  // namespace

TEST_SUITE("observables") {

TEST_CASE("constant observables") {
  Sampler s(41);
  const auto one = constant_observable(HermitianOperator::identity(3));
  for (int k = 0; k < 5; ++k) CHECK(max_entry(one.eval(s.density(3)).matrix() - identity_matrix(3)) == 0.0);
  CHECK(max_entry(constant_observable(op(pauli_z())).eval(DensityMatrix::maximally_mixed(2)).matrix() - pauli_z()) == 0.0);
  const auto a = s.hermitian(3);
  const auto rho = s.density(3);
  CHECK(expectation(StateMeasure::dirac(rho), constant_observable(a)) ==
        doctest::Approx(tr(rho.matrix(), a.matrix())).epsilon(1e-14));
  CHECK_THROWS_AS(one.eval(DensityMatrix::maximally_mixed(2)), DimensionMismatch);
}

TEST_CASE("trace-scaled observables") {
  const auto f = trace_scaled_observable(op(pauli_z()), op(pauli_x()));
  CHECK(max_entry(f.eval(basis_state(2, 0)).matrix() - pauli_x()) == 0.0);
  CHECK(max_entry(f.eval(basis_state(2, 1)).matrix() + pauli_x()) == 0.0);
  CHECK(max_entry(f.eval(DensityMatrix::maximally_mixed(2)).matrix()) == 0.0);
  CHECK_THROWS_AS(trace_scaled_observable(op(pauli_z()), HermitianOperator::identity(3)), DimensionMismatch);
}

TEST_CASE("state measures") {
  const auto p0 = basis_state(2, 0);
  const auto p1 = basis_state(2, 1);
  const StateMeasure omega({p0, p1}, {0.5, 0.5});
  CHECK(expectation(omega, constant_observable(op(pauli_z()))) == 0.0);

  SUBCASE("a genuine mixture differs from the elementary mixture at its barycentre") {
    const auto f = trace_scaled_observable(op(pauli_z()), op(pauli_z()));
    CHECK(expectation(omega, f) == doctest::Approx(1.0).epsilon(1e-15));
    const auto bary = omega.barycenter();
    CHECK(max_entry(bary.matrix() - 0.5 * identity_matrix(2)) < 1e-15);
    CHECK(expectation(StateMeasure::dirac(bary), f) == 0.0);
  }
  SUBCASE("validation") {
    CHECK_THROWS_AS(StateMeasure({}, {}), InvariantViolation);
    CHECK_THROWS_AS(StateMeasure({p0, p1}, {0.5}), InvariantViolation);
    CHECK_THROWS_AS(StateMeasure({p0, p1}, {0.6, 0.5}), InvariantViolation);
    CHECK_THROWS_AS(StateMeasure({p0, p1}, {1.2, -0.2}), InvariantViolation);
    CHECK_THROWS_AS(StateMeasure({p0, DensityMatrix::maximally_mixed(3)}, {0.5, 0.5}), DimensionMismatch);
    CHECK_NOTHROW(StateMeasure({p0, p1}, {0.5, 0.5 + 5e-13}));
  }
}

TEST_CASE("Heisenberg transform") {
  Sampler s(42);
  SUBCASE("t = 0 is the identity") {
    const auto h = build(MeanFieldSpec{s.hermitian(2), s.hermitian(2), 1.0});
    const auto f = trace_scaled_observable(s.hermitian(2), s.hermitian(2));
    const auto rho = s.density(2);
    CHECK(max_entry(heisenberg_transform(f, h, 0.0, config()).eval(rho).matrix() - f.eval(rho).matrix()) == 0.0);
  }
  SUBCASE("linear flows conjugate a constant observable independently of the state") {
    const auto hm = s.hermitian(3);
    const auto a = s.hermitian(3);
    const double t = 1.3;
    const auto g = heisenberg_transform(constant_observable(a), build(LinearSpec{hm}), t, config());
    const Matrix u = testing::pade_exp(hm.matrix(), t);
    const Matrix expected = u.adjoint() * a.matrix() * u;
    for (int k = 0; k < 3; ++k) CHECK(max_entry(g.eval(s.density(3)).matrix() - expected) <= 1e-8);
  }
  SUBCASE("group law on a mean-field example") {
    const auto h = build(MeanFieldSpec{op(pauli_x()), op(pauli_z()), 1.0});
    const auto f = trace_scaled_observable(op(pauli_z()), op(pauli_x()));
    const auto rho = projector(ket(std::cos(0.3), std::sin(0.3)));
    const double s1 = 0.4, t1 = 0.7;
    const auto nested = heisenberg_transform(heisenberg_transform(f, h, t1, config()), h, s1, config());
    const auto direct = heisenberg_transform(f, h, s1 + t1, config());
    CHECK(max_entry(nested.eval(rho).matrix() - direct.eval(rho).matrix()) <= 1e-7);
  }
}

TEST_CASE("Heisenberg transform is a unital, positive, multiplicative linear map") {
  Sampler s(43);
  for (int k = 0; k < 8; ++k) {
    const int n = k % 2 == 0 ? 2 : 3;
    const auto h = build(MeanFieldSpec{s.hermitian(n), s.hermitian(n), s.uniform(-1.0, 1.0)});
    const auto f = trace_scaled_observable(s.hermitian(n), s.hermitian(n));
    const auto g = constant_observable(s.hermitian(n));
    const auto rho = s.density(n);
    const double t = s.uniform(-2.0, 2.0);
    const auto cfg = config();

    const double alpha = s.uniform(-2.0, 2.0), beta = s.uniform(-2.0, 2.0);
    const Matrix lhs = heisenberg_transform(combine(alpha, f, beta, g), h, t, cfg).eval(rho).matrix();
    const Matrix rhs = alpha * heisenberg_transform(f, h, t, cfg).eval(rho).matrix() +
                       beta * heisenberg_transform(g, h, t, cfg).eval(rho).matrix();
    CHECK(max_entry(lhs - rhs) <= 1e-12);

    const auto one = constant_observable(HermitianOperator::identity(n));
    CHECK(max_entry(heisenberg_transform(one, h, t, cfg).eval(rho).matrix() - identity_matrix(n)) <= 1e-10);

    const Matrix b = s.complex_gaussian(n);
    const auto positive = constant_observable(HermitianOperator::hermitian_part(b * b.adjoint()));
    Eigen::SelfAdjointEigenSolver<Matrix> es(heisenberg_transform(positive, h, t, cfg).eval(rho).matrix());
    CHECK(es.eigenvalues().minCoeff() >= -1e-10);

    const FlowPoint moved = propagate(h, rho, t, cfg);
    const Matrix& u = moved.cocycle.matrix();
    const Matrix fm = f.eval(moved.state).matrix();
    const Matrix gm = g.eval(moved.state).matrix();
    const Matrix product = u.adjoint() * (fm * gm) * u;
    const Matrix factored = (u.adjoint() * fm * u) * (u.adjoint() * gm * u);
    CHECK(max_entry(product - factored) <= 1e-10);
    const Matrix tf = heisenberg_transform(f, h, t, cfg).eval(rho).matrix();
    CHECK(max_entry(tf - u.adjoint() * fm * u) <= 1e-12);
  }
}

TEST_CASE("pushforward of measures") {
  Sampler s(44);
  const auto h = build(MeanFieldSpec{s.hermitian(2), s.hermitian(2), 1.0});
  const auto rho = s.density(2);
  const auto cfg = config();
  SUBCASE("t = 0") {
    const auto same = pushforward_state(StateMeasure::dirac(rho), h, 0.0, cfg);
    CHECK(max_entry(same.support()[0].matrix() - rho.matrix()) == 0.0);
  }
  SUBCASE("Dirac measures move to the evolved point") {
    const auto moved = pushforward_state(StateMeasure::dirac(rho), h, 0.8, cfg);
    REQUIRE(moved.support().size() == 1);
    CHECK(max_entry(moved.support()[0].matrix() - propagate(h, rho, 0.8, cfg).state.matrix()) == 0.0);
    CHECK(moved.weights()[0] == 1.0);
  }
  SUBCASE("two Rabi curves under a linear flow") {
    const double r = 1.0 / std::sqrt(2.0);
    const auto plus = projector(ket(r, r));
    const auto plus_i = projector(ket(r, I * r));
    const StateMeasure omega({plus, plus_i}, {0.25, 0.75});
    const auto lin = build(LinearSpec{op(pauli_z())});
    for (double t : {0.3, 1.0, 2.2}) {
      const double got = expectation(pushforward_state(omega, lin, t, cfg), constant_observable(op(pauli_x())));
      // <sx> is cos(2t) from |+> and -sin(2t) from |+i>.
      const double expected = 0.25 * std::cos(2.0 * t) - 0.75 * std::sin(2.0 * t);
      CHECK(got == doctest::Approx(expected).epsilon(1e-8));
    }
  }
}

TEST_CASE("duality between pushforward and Heisenberg transform") {
  Sampler s(45);
  for (int k = 0; k < 8; ++k) {
    const auto d = random_draw(s, 2, k);
    const double w = s.uniform(0.1, 0.9);
    const StateMeasure omega({s.density(2), projector(s.state(2))}, {w, 1.0 - w});
    for (double t : {0.5, 1.0, 2.0}) CHECK(duality_residual(omega, d.f, d.h, t, config()) <= 1e-8);
  }
}

TEST_CASE("conservation residual") {
  Sampler s(46);
  SUBCASE("t = 0 is exactly zero") {
    const auto d = random_draw(s, 2, 3);
    CHECK(conservation_residual(d.f, d.h, s.density(2), 0.0, config()) == 0.0);
  }
  SUBCASE("linear flows with constant observables") {
    for (int k = 0; k < 5; ++k) {
      const auto h = build(LinearSpec{s.hermitian(4)});
      const auto f = constant_observable(s.hermitian(4));
      CHECK(conservation_residual(f, h, s.density(4), 1.7, config()) <= 1e-10);
    }
  }
  SUBCASE("mean field with a state-dependent observable") {
    const auto h = build(MeanFieldSpec{op(pauli_x()), op(pauli_z()), 1.0});
    const auto f = trace_scaled_observable(op(pauli_z()), op(pauli_x()));
    CHECK(conservation_residual(f, h, basis_state(2, 0), 2.0, config()) <= 1e-7);
  }
  SUBCASE("random built-ins at N = 2 and 4") {
    for (int k = 0; k < 8; ++k) {
      const int n = k < 4 ? 2 : 4;
      const auto d = random_draw(s, n, k);
      const auto rho = s.density(n);
      for (double t : {0.5, 1.0, 2.0, 5.0}) CHECK(conservation_residual(d.f, d.h, rho, t, config()) <= 1e-8);
    }
  }
}

TEST_CASE("mean field conserves the pairing while breaking transition probabilities") {
  const auto h = build(MeanFieldSpec{HermitianOperator::zero(2), op(pauli_z()), 1.0});
  const auto p = projector(ket(std::cos(0.1), std::sin(0.1)));
  const double r = 1.0 / std::sqrt(2.0);
  const auto q = projector(ket(r, r));
  IntegratorConfig cfg = config();
  cfg.t_final = 5.0;
  CHECK(wigner_deviation(h, p, q, cfg).max_dev >= 0.01);
  const auto f = trace_scaled_observable(op(pauli_z()), op(pauli_x()));
  for (double t : {0.5, 1.0, 2.0, 5.0}) {
    CHECK(conservation_residual(f, h, p, t, config()) <= 1e-8);
    CHECK(conservation_residual(constant_observable(op(pauli_x())), h, q, t, config()) <= 1e-8);
  }
}

}  // TEST_SUITE
