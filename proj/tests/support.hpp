#ifndef EQM_TESTS_SUPPORT_HPP
#define EQM_TESTS_SUPPORT_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "eqm/hilbert.hpp"

namespace eqm::testing {

inline const cplx I{0.0, 1.0};

/// Seeded source of random Hermitian matrices, states and density matrices.
class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(rng_); }

  Matrix complex_gaussian(int n) {
    Matrix m(n, n);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) m(r, c) = cplx(normal(), normal());
    return m;
  }

  Matrix hermitian_matrix(int n, double scale = 1.0) {
    const Matrix g = complex_gaussian(n);
    Matrix h = 0.5 * scale * (g + g.adjoint());
    return 0.5 * (h + h.adjoint());
  }

  HermitianOperator hermitian(int n, double scale = 1.0) { return HermitianOperator(hermitian_matrix(n, scale)); }

  StateVector state(int n) {
    Vector v(n);
    for (int i = 0; i < n; ++i) v(i) = cplx(normal(), normal());
    return StateVector::normalized(v);
  }

  /// Full-rank density matrix G G^dagger / Tr, eigenvalues bounded away from zero.
  DensityMatrix density(int n) {
    const Matrix g = complex_gaussian(n);
    Matrix m = g * g.adjoint() + 0.2 * Matrix::Identity(n, n);
    m /= m.trace().real();
    m = 0.5 * (m + m.adjoint());
    return DensityMatrix(m);
  }

  /// Traceless Hermitian direction with unit max-abs entry.
  HermitianOperator traceless_direction(int n) {
    Matrix d = hermitian_matrix(n);
    d -= (d.trace() / double(n)) * Matrix::Identity(n, n);
    d /= d.cwiseAbs().maxCoeff();
    d = 0.5 * (d + d.adjoint());
    return HermitianOperator(d);
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

/// exp(-i s A) by Pade scaling and squaring.
inline Matrix pade_exp(const Matrix& a, double s) {
  const Matrix x = (-I * s) * a;
  return x.exp();
}

inline double max_entry(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

inline Matrix ket_bra(const Vector& v) { return v * v.adjoint(); }

}  // namespace eqm::testing

#endif  // EQM_TESTS_SUPPORT_HPP
