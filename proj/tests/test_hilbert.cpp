#include "doctest.h"

#include <cmath>
#include <limits>
#include <numbers>

#include "eqm/hilbert.hpp"
#include "support.hpp"

using namespace eqm;
using eqm::testing::I;
using eqm::testing::max_entry;
using eqm::testing::Sampler;

namespace {

const HermitianOperator sx() { return HermitianOperator(pauli_x()); }
const HermitianOperator sy() { return HermitianOperator(pauli_y()); }
const HermitianOperator sz() { return HermitianOperator(pauli_z()); }

StateVector ket(cplx a, cplx b) {
  Vector v(2);
  v << a, b;
  return StateVector(v);
}

}  // namespace

TEST_SUITE("hilbert") {

TEST_CASE("constructors enforce their invariants") {
  SUBCASE("complex matrix must be square and finite") {
    CHECK_THROWS_AS(ComplexMatrix(Matrix(2, 3)), DimensionMismatch);
    Matrix m = Matrix::Zero(2, 2);
    m(0, 1) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(ComplexMatrix{m}, InvariantViolation);
  }
  SUBCASE("hermitian rejects asymmetric input beyond 1e-12") {
    Matrix m = pauli_x();
    m(0, 1) += 1e-9;
    CHECK_THROWS_AS(HermitianOperator{m}, InvariantViolation);
    Matrix ok = pauli_x();
    ok(0, 1) += 1e-13;
    CHECK_NOTHROW(HermitianOperator{ok});
  }
  SUBCASE("hermitian_part symmetrizes") {
    Matrix m(2, 2);
    m << 1.0, 2.0, 0.0, 3.0;
    const auto h = HermitianOperator::hermitian_part(m);
    CHECK(h.matrix()(0, 1) == cplx(1.0, 0.0));
    CHECK(h.matrix()(1, 0) == cplx(1.0, 0.0));
  }
  SUBCASE("unitary rejects a non-unitary matrix") {
    CHECK_THROWS_AS(UnitaryOperator(2.0 * identity_matrix(2)), InvariantViolation);
    CHECK_NOTHROW(UnitaryOperator{pauli_y()});
  }
  SUBCASE("state vector must be normalized") {
    Vector v(2);
    v << 1.0, 1.0;
    CHECK_THROWS_AS(StateVector{v}, InvariantViolation);
    CHECK(StateVector::normalized(v).vector().norm() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK_THROWS_AS(StateVector::normalized(Vector::Zero(2)), InvariantViolation);
  }
  SUBCASE("density matrix checks trace, hermiticity and positivity") {
    CHECK_THROWS_AS(DensityMatrix(Matrix(Eigen::Vector2cd(0.7, 0.4).asDiagonal())), InvariantViolation);
    CHECK_THROWS_AS(DensityMatrix(Matrix(Eigen::Vector2cd(1.2, -0.2).asDiagonal())), InvariantViolation);
    Matrix skew = Matrix(Eigen::Vector2cd(0.5, 0.5).asDiagonal());
    skew(0, 1) = cplx(0.0, 0.1);
    skew(1, 0) = cplx(0.0, 0.1);
    CHECK_THROWS_AS(DensityMatrix{skew}, InvariantViolation);
    CHECK_NOTHROW(DensityMatrix(Matrix(Eigen::Vector2cd(1.0 + 1e-11, -1e-11).asDiagonal())));
  }
  SUBCASE("renormalize repairs trace and symmetry but not negativity") {
    Matrix m(2, 2);
    m << 2.0, 0.1, 0.0, 2.0;
    const DensityMatrix rho = renormalize(m);
    CHECK(rho.matrix().trace().real() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(max_entry(rho.matrix() - rho.matrix().adjoint()) == 0.0);
    CHECK_THROWS_AS(renormalize(Matrix(Eigen::Vector2cd(2.0, -1.0).asDiagonal())), InvariantViolation);
  }
}

TEST_CASE("commutator") {
  CHECK(max_entry(commutator(sx(), sx()).matrix()) == 0.0);
  CHECK(max_entry(commutator(sx(), sy()).matrix() - 2.0 * I * pauli_z()) < 1e-15);
  CHECK(max_entry(commutator(sz(), sz() + sx()).matrix() - 2.0 * I * pauli_y()) < 1e-15);
  CHECK_THROWS_AS(commutator(sx(), HermitianOperator::identity(3)), DimensionMismatch);
}

TEST_CASE("i[A,B] is hermitian for random A, B") {
  Sampler s(11);
  for (int k = 0; k < 50; ++k) {
    const int n = 2 + k % 7;
    const Matrix c = I * commutator(s.hermitian(n), s.hermitian(n)).matrix();
    CHECK_NOTHROW(HermitianOperator{c});
  }
}

TEST_CASE("trace pairing") {
  const DensityMatrix zero = projector(ket(1.0, 0.0));
  CHECK(trace_pairing(zero, sz()) == 1.0);
  CHECK(trace_pairing(DensityMatrix::maximally_mixed(2), sx()) == 0.0);
  Sampler s(12);
  for (int n : {2, 3, 5}) CHECK(trace_pairing(s.density(n), HermitianOperator::identity(n)) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK_THROWS_AS(trace_pairing(zero, HermitianOperator::identity(3)), DimensionMismatch);
}

TEST_CASE("transition probability") {
  const double r = 1.0 / std::sqrt(2.0);
  const DensityMatrix p0 = projector(ket(1.0, 0.0));
  const DensityMatrix p1 = projector(ket(0.0, 1.0));
  const DensityMatrix plus = projector(ket(r, r));
  CHECK(transition_probability(p0, p0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(transition_probability(p0, p1) == 0.0);
  CHECK(transition_probability(p0, plus) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK_THROWS_AS(transition_probability(p0, DensityMatrix::maximally_mixed(2)), InvariantViolation);

  Sampler s(13);
  for (int k = 0; k < 50; ++k) {
    const auto a = projector(s.state(4));
    const auto b = projector(s.state(4));
    const double ab = transition_probability(a, b);
    CHECK(ab == doctest::Approx(transition_probability(b, a)).epsilon(1e-14));
    CHECK(ab >= 0.0);
    CHECK(ab <= 1.0 + 1e-12);
  }
}

TEST_CASE("unitary exponential") {
  CHECK(max_entry(unitary_exponential(sx(), 0.0).matrix() - identity_matrix(2)) == 0.0);
  Matrix expected = Matrix::Zero(2, 2);
  expected(0, 0) = std::exp(-I * (std::numbers::pi / 2));
  expected(1, 1) = std::exp(I * (std::numbers::pi / 2));
  CHECK(max_entry(unitary_exponential(sz(), std::numbers::pi / 2).matrix() - expected) < 1e-15);
  const double s = 0.83;
  CHECK(max_entry(unitary_exponential(HermitianOperator::identity(3), s).matrix() -
                  std::exp(-I * s) * identity_matrix(3)) < 1e-15);
}

TEST_CASE("unitary exponential agrees with a Pade oracle and forms a group") {
  Sampler s(14);
  for (int k = 0; k < 40; ++k) {
    const int n = 2 + k % 9;
    const auto a = s.hermitian(n);
    const double t1 = s.uniform(-2.0, 2.0);
    const double t2 = s.uniform(-2.0, 2.0);
    const Matrix u1 = unitary_exponential(a, t1).matrix();
    CHECK(max_entry(u1 - testing::pade_exp(a.matrix(), t1)) < 1e-11);
    const Matrix product = u1 * unitary_exponential(a, t2).matrix();
    CHECK(max_entry(product - unitary_exponential(a, t1 + t2).matrix()) < 1e-10);
    CHECK(unitary_exponential(a, t1).unitarity_defect() < 1e-13);
  }
}

TEST_CASE("projector") {
  const double r = 1.0 / std::sqrt(2.0);
  CHECK(max_entry(projector(ket(1.0, 0.0)).matrix() - Matrix(Eigen::Vector2cd(1.0, 0.0).asDiagonal())) == 0.0);
  CHECK(max_entry(projector(ket(r, r)).matrix() - Matrix::Constant(2, 2, 0.5)) < 1e-15);

  Sampler s(15);
  for (int k = 0; k < 30; ++k) {
    const auto psi = s.state(5);
    const cplx phase = std::exp(I * s.uniform(0.0, 6.0));
    const Matrix p = projector(psi).matrix();
    CHECK(max_entry(p - projector(StateVector(phase * psi.vector())).matrix()) < 1e-15);
    CHECK(max_entry(p * p - p) < 1e-12);
    CHECK(projector(psi).is_pure());
  }
}

TEST_CASE("spectrum") {
  for (int n : {2, 3, 8}) {
    const auto spec = spectrum(DensityMatrix::maximally_mixed(n));
    REQUIRE(spec.size() == static_cast<std::size_t>(n));
    for (double x : spec) CHECK(x == doctest::Approx(1.0 / n).epsilon(1e-14));
  }
  Sampler s(16);
  const auto pure = spectrum(projector(s.state(4)));
  CHECK(pure[0] == doctest::Approx(1.0).epsilon(1e-14));
  for (std::size_t i = 1; i < pure.size(); ++i) CHECK(std::abs(pure[i]) < 1e-14);
  const auto diag = spectrum(DensityMatrix(Matrix(Eigen::Vector2cd(0.3, 0.7).asDiagonal())));
  CHECK(diag[0] == doctest::Approx(0.7).epsilon(1e-15));
  CHECK(diag[1] == doctest::Approx(0.3).epsilon(1e-15));
}

TEST_CASE("unitary conjugation preserves the spectrum") {
  Sampler s(17);
  for (int k = 0; k < 40; ++k) {
    const int n = 2 + k % 6;
    const auto rho = s.density(n);
    const auto u = unitary_exponential(s.hermitian(n), s.uniform(-3.0, 3.0));
    const auto before = spectrum(rho);
    const auto after = spectrum(conjugate(u, rho));
    for (int i = 0; i < n; ++i) CHECK(std::abs(before[i] - after[i]) < 1e-10);
  }
}

TEST_CASE("operator arithmetic and purity") {
  const auto sum = sx() + sz();
  CHECK(sum.matrix()(0, 0) == cplx(1.0, 0.0));
  CHECK(max_entry((2.0 * sx() - sx()).matrix() - pauli_x()) == 0.0);
  CHECK_THROWS_AS(sx() + HermitianOperator::identity(3), DimensionMismatch);
  CHECK(DensityMatrix::maximally_mixed(4).purity() == doctest::Approx(0.25).epsilon(1e-15));
  CHECK_FALSE(DensityMatrix::maximally_mixed(2).is_pure());
  const auto u = UnitaryOperator(pauli_x());
  CHECK(max_entry((u.adjoint() * u).matrix() - identity_matrix(2)) == 0.0);
  CHECK((u * ket(1.0, 0.0)).vector()(1) == cplx(1.0, 0.0));
}

}  // TEST_SUITE
