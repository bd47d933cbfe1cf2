#ifndef EQM_HILBERT_HPP
#define EQM_HILBERT_HPP

// Dense complex linear algebra on a finite-dimensional Hilbert space.
//
// The wrapper types below carry their invariants: a value of type
// HermitianOperator, UnitaryOperator, DensityMatrix or StateVector has been
// checked against the tolerances in eqm::tolerance when it was built. The
// constructors reject bad input; they never repair it. The only repair path
// is renormalize().

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace eqm {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

namespace tolerance {
inline constexpr double hermiticity = 1e-12;   // max |A - A^dagger|
inline constexpr double unitarity = 1e-10;     // max |U^dagger U - 1|
inline constexpr double psd_slack = 1e-10;     // smallest admissible eigenvalue is -psd_slack
inline constexpr double trace = 1e-12;         // |Tr rho - 1|
inline constexpr double normalization = 1e-12; // | |psi| - 1 |
inline constexpr double purity = 1e-10;        // pure means Tr rho^2 >= 1 - purity
inline constexpr double imaginary = 1e-12;     // admissible Im Tr(rho A)
}  // namespace tolerance

inline constexpr int max_dimension = 64;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class InvariantViolation : public Error {
 public:
  using Error::Error;
};

class NumericalFailure : public Error {
 public:
  using Error::Error;
};

/// Square matrix with finite entries.
class ComplexMatrix {
 public:
  explicit ComplexMatrix(Matrix m);

  int dim() const { return static_cast<int>(m_.rows()); }
  const Matrix& matrix() const { return m_; }
  cplx operator()(int i, int j) const { return m_(i, j); }

 private:
  Matrix m_;
};

class HermitianOperator {
 public:
  /// Throws InvariantViolation unless max |A - A^dagger| <= tolerance::hermiticity.
  explicit HermitianOperator(Matrix m);
  explicit HermitianOperator(const ComplexMatrix& m) : HermitianOperator(m.matrix()) {}

  /// (M + M^dagger)/2; still rejects non-finite or non-square input.
  static HermitianOperator hermitian_part(const Matrix& m);
  static HermitianOperator zero(int n);
  static HermitianOperator identity(int n);

  int dim() const { return static_cast<int>(m_.rows()); }
  const Matrix& matrix() const { return m_; }

  friend HermitianOperator operator+(const HermitianOperator& a, const HermitianOperator& b);
  friend HermitianOperator operator-(const HermitianOperator& a, const HermitianOperator& b);
  friend HermitianOperator operator*(double s, const HermitianOperator& a);

 private:
  struct trusted {};
  HermitianOperator(Matrix m, trusted) : m_(std::move(m)) {}
  Matrix m_;
};

class UnitaryOperator {
 public:
  /// Throws InvariantViolation unless max |U^dagger U - 1| <= tolerance::unitarity.
  explicit UnitaryOperator(Matrix m);

  static UnitaryOperator identity(int n);

  int dim() const { return static_cast<int>(m_.rows()); }
  const Matrix& matrix() const { return m_; }
  UnitaryOperator adjoint() const;
  /// max |U^dagger U - 1|, for drift monitoring.
  double unitarity_defect() const;

  friend UnitaryOperator operator*(const UnitaryOperator& a, const UnitaryOperator& b);
  friend UnitaryOperator operator*(cplx phase, const UnitaryOperator& a);

 private:
  struct trusted {};
  UnitaryOperator(Matrix m, trusted) : m_(std::move(m)) {}
  Matrix m_;

  friend UnitaryOperator unitary_exponential(const HermitianOperator& a, double s);
};

class StateVector {
 public:
  /// Throws InvariantViolation unless | |psi| - 1 | <= tolerance::normalization.
  explicit StateVector(Vector v);

  /// Scales v to unit norm; throws InvariantViolation on the zero vector.
  static StateVector normalized(const Vector& v);

  int dim() const { return static_cast<int>(v_.size()); }
  const Vector& vector() const { return v_; }

  friend StateVector operator*(const UnitaryOperator& u, const StateVector& psi);

 private:
  struct trusted {};
  StateVector(Vector v, trusted) : v_(std::move(v)) {}
  Vector v_;
};

class DensityMatrix {
 public:
  /// Hermitian, unit trace and positive semidefinite, each within its tolerance.
  explicit DensityMatrix(Matrix m);

  static DensityMatrix maximally_mixed(int n);

  int dim() const { return static_cast<int>(m_.rows()); }
  const Matrix& matrix() const { return m_; }
  double purity() const;
  bool is_pure() const { return purity() >= 1.0 - tolerance::purity; }

 private:
  struct trusted {};
  DensityMatrix(Matrix m, trusted) : m_(std::move(m)) {}
  Matrix m_;

  friend DensityMatrix conjugate(const UnitaryOperator& u, const DensityMatrix& rho);
  friend DensityMatrix projector(const StateVector& psi);
  friend DensityMatrix renormalize(const Matrix& m);
};

// Pauli matrices and identity, as plain matrices.
Matrix pauli_x();
Matrix pauli_y();
Matrix pauli_z();
Matrix identity_matrix(int n);

double max_abs(const Matrix& m);

/// AB - BA.
ComplexMatrix commutator(const HermitianOperator& a, const HermitianOperator& b);

/// Re Tr(rho A). Throws InvariantViolation if |Im Tr(rho A)| > tolerance::imaginary.
double trace_pairing(const DensityMatrix& rho, const HermitianOperator& a);

/// Tr(PQ) for pure P, Q.
double transition_probability(const DensityMatrix& p, const DensityMatrix& q);

/// exp(-i s A), through the eigendecomposition of A.
UnitaryOperator unitary_exponential(const HermitianOperator& a, double s);

/// |psi><psi|.
DensityMatrix projector(const StateVector& psi);

/// Eigenvalues of rho in descending order.
std::vector<double> spectrum(const DensityMatrix& rho);

/// U rho U^dagger. The result is a density matrix whenever rho is, so it is
/// not re-validated; only the Hermitian part of the floating-point product is kept.
DensityMatrix conjugate(const UnitaryOperator& u, const DensityMatrix& rho);

/// Escape hatch: symmetrizes (M + M^dagger)/2 and rescales to unit trace.
/// Still throws if the result is not positive semidefinite.
DensityMatrix renormalize(const Matrix& m);

}  // namespace eqm

#endif  // EQM_HILBERT_HPP
