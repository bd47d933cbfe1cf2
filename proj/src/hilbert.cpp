#include "eqm/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace eqm {

namespace {

std::string fmt_double(double x) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << x;
  return os.str();
}

std::string fmt_exact(double x) {
  std::ostringstream os;
  os.precision(15);
  os << x;
  return os.str();
}

void require_square_finite(const Matrix& m, const char* what) {
  if (m.rows() == 0 || m.rows() != m.cols()) {
    std::ostringstream os;
    os << what << ": expected a non-empty square matrix, got " << m.rows() << "x" << m.cols();
    throw DimensionMismatch(os.str());
  }
  if (m.rows() > max_dimension) {
    std::ostringstream os;
    os << what << ": dimension " << m.rows() << " exceeds supported maximum " << max_dimension;
    throw DimensionMismatch(os.str());
  }
  if (!m.allFinite()) throw InvariantViolation(std::string(what) + ": non-finite entry");
}

void require_same_dim(int a, int b, const char* what) {
  if (a != b) {
    std::ostringstream os;
    os << what << ": dimension mismatch " << a << " vs " << b;
    throw DimensionMismatch(os.str());
  }
}

double hermiticity_defect(const Matrix& m) { return max_abs(m - m.adjoint()); }

Eigen::SelfAdjointEigenSolver<Matrix> eigensolve(const Matrix& m, int options) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m, options);
  if (es.info() != Eigen::Success) throw NumericalFailure("eigendecomposition did not converge");
  return es;
}

}  // namespace

double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

Matrix pauli_x() {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

Matrix pauli_y() {
  Matrix m(2, 2);
  m << 0, cplx(0, -1), cplx(0, 1), 0;
  return m;
}

Matrix pauli_z() {
  Matrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

Matrix identity_matrix(int n) { return Matrix::Identity(n, n); }

// ComplexMatrix

ComplexMatrix::ComplexMatrix(Matrix m) : m_(std::move(m)) { require_square_finite(m_, "ComplexMatrix"); }

// HermitianOperator

HermitianOperator::HermitianOperator(Matrix m) : m_(std::move(m)) {
  require_square_finite(m_, "HermitianOperator");
  const double defect = hermiticity_defect(m_);
  if (defect > tolerance::hermiticity)
    throw InvariantViolation("HermitianOperator: max |A - A^dagger| = " + fmt_double(defect));
}

HermitianOperator HermitianOperator::hermitian_part(const Matrix& m) {
  require_square_finite(m, "HermitianOperator");
  return HermitianOperator(Matrix(0.5 * (m + m.adjoint())), trusted{});
}

HermitianOperator HermitianOperator::zero(int n) { return HermitianOperator(Matrix::Zero(n, n), trusted{}); }

HermitianOperator HermitianOperator::identity(int n) {
  return HermitianOperator(Matrix::Identity(n, n), trusted{});
}

HermitianOperator operator+(const HermitianOperator& a, const HermitianOperator& b) {
  require_same_dim(a.dim(), b.dim(), "operator+");
  return HermitianOperator(Matrix(a.m_ + b.m_), HermitianOperator::trusted{});
}

HermitianOperator operator-(const HermitianOperator& a, const HermitianOperator& b) {
  require_same_dim(a.dim(), b.dim(), "operator-");
  return HermitianOperator(Matrix(a.m_ - b.m_), HermitianOperator::trusted{});
}

HermitianOperator operator*(double s, const HermitianOperator& a) {
  if (!std::isfinite(s)) throw InvariantViolation("operator*: non-finite scalar");
  return HermitianOperator(Matrix(s * a.m_), HermitianOperator::trusted{});
}

// UnitaryOperator

UnitaryOperator::UnitaryOperator(Matrix m) : m_(std::move(m)) {
  require_square_finite(m_, "UnitaryOperator");
  const double defect = unitarity_defect();
  if (defect > tolerance::unitarity)
    throw InvariantViolation("UnitaryOperator: max |U^dagger U - 1| = " + fmt_double(defect));
}

UnitaryOperator UnitaryOperator::identity(int n) { return UnitaryOperator(Matrix::Identity(n, n), trusted{}); }

UnitaryOperator UnitaryOperator::adjoint() const { return UnitaryOperator(m_.adjoint(), trusted{}); }

double UnitaryOperator::unitarity_defect() const {
  return max_abs(m_.adjoint() * m_ - Matrix::Identity(m_.rows(), m_.cols()));
}

UnitaryOperator operator*(const UnitaryOperator& a, const UnitaryOperator& b) {
  require_same_dim(a.dim(), b.dim(), "UnitaryOperator product");
  return UnitaryOperator(Matrix(a.m_ * b.m_), UnitaryOperator::trusted{});
}

UnitaryOperator operator*(cplx phase, const UnitaryOperator& a) {
  if (std::abs(std::abs(phase) - 1.0) > tolerance::unitarity)
    throw InvariantViolation("UnitaryOperator: phase factor is not unimodular");
  return UnitaryOperator(Matrix(phase * a.m_), UnitaryOperator::trusted{});
}

// StateVector

StateVector::StateVector(Vector v) : v_(std::move(v)) {
  if (v_.size() == 0 || v_.size() > max_dimension) throw DimensionMismatch("StateVector: bad dimension");
  if (!v_.allFinite()) throw InvariantViolation("StateVector: non-finite amplitude");
  const double norm = v_.norm();
  if (std::abs(norm - 1.0) > tolerance::normalization)
    throw InvariantViolation("StateVector: norm = " + fmt_double(norm) + ", expected 1");
}

StateVector StateVector::normalized(const Vector& v) {
  if (v.size() == 0 || v.size() > max_dimension) throw DimensionMismatch("StateVector: bad dimension");
  if (!v.allFinite()) throw InvariantViolation("StateVector: non-finite amplitude");
  const double norm = v.norm();
  if (norm == 0.0) throw InvariantViolation("StateVector: zero vector");
  return StateVector(Vector(v / norm), trusted{});
}

StateVector operator*(const UnitaryOperator& u, const StateVector& psi) {
  require_same_dim(u.dim(), psi.dim(), "UnitaryOperator * StateVector");
  return StateVector(Vector(u.matrix() * psi.vector()), StateVector::trusted{});
}

// DensityMatrix

DensityMatrix::DensityMatrix(Matrix m) : m_(std::move(m)) {
  require_square_finite(m_, "DensityMatrix");
  const double defect = hermiticity_defect(m_);
  if (defect > tolerance::hermiticity)
    throw InvariantViolation("DensityMatrix: not Hermitian, max |rho - rho^dagger| = " + fmt_double(defect));
  const double tr = m_.trace().real();
  if (std::abs(tr - 1.0) > tolerance::trace)
    throw InvariantViolation("DensityMatrix: trace = " + fmt_exact(tr) + ", expected 1");
  const auto es = eigensolve(m_, Eigen::EigenvaluesOnly);
  const double lowest = es.eigenvalues().minCoeff();
  if (lowest < -tolerance::psd_slack)
    throw InvariantViolation("DensityMatrix: negative eigenvalue " + fmt_double(lowest));
}

DensityMatrix DensityMatrix::maximally_mixed(int n) {
  if (n < 1 || n > max_dimension) throw DimensionMismatch("DensityMatrix: bad dimension");
  return DensityMatrix(Matrix(Matrix::Identity(n, n) / static_cast<double>(n)), trusted{});
}

double DensityMatrix::purity() const { return (m_ * m_).trace().real(); }

// Operations

ComplexMatrix commutator(const HermitianOperator& a, const HermitianOperator& b) {
  require_same_dim(a.dim(), b.dim(), "commutator");
  return ComplexMatrix(a.matrix() * b.matrix() - b.matrix() * a.matrix());
}

double trace_pairing(const DensityMatrix& rho, const HermitianOperator& a) {
  require_same_dim(rho.dim(), a.dim(), "trace_pairing");
  // Tr(rho A) = sum_ij rho_ij A_ji without forming the product.
  const cplx tr = (rho.matrix().transpose().cwiseProduct(a.matrix())).sum();
  if (std::abs(tr.imag()) > tolerance::imaginary)
    throw InvariantViolation("trace_pairing: Im Tr(rho A) = " + fmt_double(tr.imag()));
  return tr.real();
}

double transition_probability(const DensityMatrix& p, const DensityMatrix& q) {
  require_same_dim(p.dim(), q.dim(), "transition_probability");
  if (!p.is_pure() || !q.is_pure()) throw InvariantViolation("transition_probability: argument is not pure");
  return (p.matrix().transpose().cwiseProduct(q.matrix())).sum().real();
}

UnitaryOperator unitary_exponential(const HermitianOperator& a, double s) {
  if (!std::isfinite(s)) throw InvariantViolation("unitary_exponential: non-finite time");
  if (s == 0.0) return UnitaryOperator::identity(a.dim());
  const auto es = eigensolve(a.matrix(), Eigen::ComputeEigenvectors);
  const Matrix& v = es.eigenvectors();
  Vector phases(a.dim());
  for (int k = 0; k < a.dim(); ++k) phases(k) = std::polar(1.0, -s * es.eigenvalues()(k));
  return UnitaryOperator(Matrix(v * phases.asDiagonal() * v.adjoint()), UnitaryOperator::trusted{});
}

DensityMatrix projector(const StateVector& psi) {
  const Vector& v = psi.vector();
  return DensityMatrix(Matrix(v * v.adjoint()), DensityMatrix::trusted{});
}

std::vector<double> spectrum(const DensityMatrix& rho) {
  const auto es = eigensolve(rho.matrix(), Eigen::EigenvaluesOnly);
  std::vector<double> out(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

DensityMatrix conjugate(const UnitaryOperator& u, const DensityMatrix& rho) {
  require_same_dim(u.dim(), rho.dim(), "conjugate");
  const Matrix m = u.matrix() * rho.matrix() * u.matrix().adjoint();
  return DensityMatrix(Matrix(0.5 * (m + m.adjoint())), DensityMatrix::trusted{});
}

DensityMatrix renormalize(const Matrix& m) {
  require_square_finite(m, "renormalize");
  Matrix h = 0.5 * (m + m.adjoint());
  const double tr = h.trace().real();
  if (!(std::abs(tr) > 0.0)) throw InvariantViolation("renormalize: zero trace");
  h /= tr;
  const auto es = eigensolve(h, Eigen::EigenvaluesOnly);
  const double lowest = es.eigenvalues().minCoeff();
  if (lowest < -tolerance::psd_slack)
    throw InvariantViolation("renormalize: negative eigenvalue " + fmt_double(lowest));
  return DensityMatrix(std::move(h), DensityMatrix::trusted{});
}

}  // namespace eqm
