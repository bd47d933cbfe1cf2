#include "eqm/hamiltonian.hpp"

#include <cmath>
#include <sstream>

namespace eqm {

namespace {

// Re Tr(X A) for arbitrary square X; the value maps of the families accept
// perturbed matrices, so no DensityMatrix is required here.
double pair(const Matrix& x, const Matrix& a) { return x.transpose().cwiseProduct(a).sum().real(); }

void require_dim(int expected, int got, const std::string& what) {
  if (expected != got) {
    std::ostringstream os;
    os << what << ": dimension " << got << " does not match " << expected;
    throw DimensionMismatch(os.str());
  }
}

void require_finite(double x, const std::string& what) {
  if (!std::isfinite(x)) throw InvariantViolation(what + ": non-finite coefficient");
}

constexpr double fd_step = 1e-5;

HamiltonianFunction build_linear(const LinearSpec& s) {
  const Matrix a = s.a.matrix();
  return HamiltonianFunction(
      "linear", s.a.dim(), [a](const Matrix& x) { return pair(x, a); }, [a](const Matrix&) { return a; });
}

HamiltonianFunction build_mean_field(const MeanFieldSpec& s) {
  require_dim(s.a.dim(), s.b.dim(), "MeanField B");
  require_finite(s.lambda, "MeanField lambda");
  const Matrix a = s.a.matrix();
  const Matrix b = s.b.matrix();
  const double lambda = s.lambda;
  return HamiltonianFunction(
      "mean_field", s.a.dim(),
      [a, b, lambda](const Matrix& x) {
        const double mb = pair(x, b);
        return pair(x, a) + 0.5 * lambda * mb * mb;
      },
      [a, b, lambda](const Matrix& x) -> Matrix { return a + (lambda * pair(x, b)) * b; });
}

HamiltonianFunction build_polynomial(const PolynomialSpec& s) {
  if (s.dim < 1 || s.dim > max_dimension) throw DimensionMismatch("Polynomial: bad dimension");
  struct Term {
    double c;
    std::vector<Matrix> f;
  };
  std::vector<Term> terms;
  for (std::size_t k = 0; k < s.terms.size(); ++k) {
    const auto& t = s.terms[k];
    require_finite(t.coefficient, "Polynomial term " + std::to_string(k));
    Term term{t.coefficient, {}};
    for (const auto& f : t.factors) {
      require_dim(s.dim, f.dim(), "Polynomial term " + std::to_string(k));
      term.f.push_back(f.matrix());
    }
    terms.push_back(std::move(term));
  }
  const int n = s.dim;
  return HamiltonianFunction(
      "polynomial", n,
      [terms](const Matrix& x) {
        double v = 0.0;
        for (const auto& t : terms) {
          double p = t.c;
          for (const auto& f : t.f) p *= pair(x, f);
          v += p;
        }
        return v;
      },
      [terms, n](const Matrix& x) {
        Matrix d = Matrix::Zero(n, n);
        for (const auto& t : terms) {
          std::vector<double> m(t.f.size());
          for (std::size_t i = 0; i < t.f.size(); ++i) m[i] = pair(x, t.f[i]);
          for (std::size_t j = 0; j < t.f.size(); ++j) {
            double w = t.c;
            for (std::size_t i = 0; i < t.f.size(); ++i)
              if (i != j) w *= m[i];
            d += w * t.f[j];
          }
        }
        return d;
      });
}

}  // namespace

HamiltonianFunction::HamiltonianFunction(std::string label, int dim, ValueMap value, DifferentialMap differential)
    : label_(std::move(label)), dim_(dim), value_(std::move(value)), differential_(std::move(differential)) {
  if (dim_ < 1 || dim_ > max_dimension) throw DimensionMismatch("HamiltonianFunction: bad dimension");
  if (!value_ || !differential_) throw InvariantViolation("HamiltonianFunction: empty map");
}

double HamiltonianFunction::value(const DensityMatrix& rho) const {
  require_dim(dim_, rho.dim(), "HamiltonianFunction::value");
  return value_(rho.matrix());
}

HermitianOperator HamiltonianFunction::differential(const DensityMatrix& rho) const {
  require_dim(dim_, rho.dim(), "HamiltonianFunction::differential");
  Matrix d = differential_(rho.matrix());
  require_dim(dim_, static_cast<int>(d.rows()), label_ + " differential");
  return HermitianOperator(std::move(d));
}

HamiltonianFunction build(const HamiltonianSpec& spec) {
  return std::visit(
      [](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, LinearSpec>) {
          auto h = build_linear(s);
          h.linear_ = s.a;
          return h;
        } else if constexpr (std::is_same_v<T, MeanFieldSpec>) {
          return build_mean_field(s);
        } else {
          return build_polynomial(s);
        }
      },
      spec);
}

std::vector<HermitianOperator> traceless_basis(int n) {
  std::vector<HermitianOperator> basis;
  const double r = 1.0 / std::sqrt(2.0);
  for (int j = 0; j < n; ++j) {
    for (int k = j + 1; k < n; ++k) {
      Matrix s = Matrix::Zero(n, n);
      s(j, k) = r;
      s(k, j) = r;
      basis.emplace_back(std::move(s));
      Matrix a = Matrix::Zero(n, n);
      a(j, k) = cplx(0, -r);
      a(k, j) = cplx(0, r);
      basis.emplace_back(std::move(a));
    }
  }
  // Generalized Gell-Mann diagonals, normalized to Tr(E^2) = 1.
  for (int l = 1; l < n; ++l) {
    Matrix d = Matrix::Zero(n, n);
    const double norm = 1.0 / std::sqrt(static_cast<double>(l) * (l + 1));
    for (int j = 0; j < l; ++j) d(j, j) = norm;
    d(l, l) = -l * norm;
    basis.emplace_back(std::move(d));
  }
  return basis;
}

HamiltonianFunction from_value(std::string label, int dim, HamiltonianFunction::ValueMap value) {
  if (!value) throw InvariantViolation("from_value: empty map");
  std::vector<Matrix> basis;
  for (const auto& e : traceless_basis(dim)) basis.push_back(e.matrix());
  auto differential = [value, basis](const Matrix& x) {
    Matrix d = Matrix::Zero(x.rows(), x.cols());
    for (const auto& e : basis) {
      const double slope = (value(x + fd_step * e) - value(x - fd_step * e)) / (2.0 * fd_step);
      d += slope * e;
    }
    return Matrix(0.5 * (d + d.adjoint()));
  };
  return HamiltonianFunction(std::move(label), dim, std::move(value), std::move(differential));
}

HamiltonianFunction combine(double a, const HamiltonianFunction& f, double b, const HamiltonianFunction& g) {
  require_dim(f.dim(), g.dim(), "combine");
  require_finite(a, "combine");
  require_finite(b, "combine");
  return HamiltonianFunction(
      f.label() + "+" + g.label(), f.dim(),
      [a, b, fv = f.value_, gv = g.value_](const Matrix& x) { return a * fv(x) + b * gv(x); },
      [a, b, fd = f.differential_, gd = g.differential_](const Matrix& x) -> Matrix {
        return a * fd(x) + b * gd(x);
      });
}

double poisson_bracket(const HamiltonianFunction& f, const HamiltonianFunction& h, const DensityMatrix& rho) {
  require_dim(f.dim(), h.dim(), "poisson_bracket");
  const HermitianOperator df = f.differential(rho);
  const HermitianOperator dh = h.differential(rho);
  const Matrix c = commutator(df, dh).matrix();
  // i Tr(rho C) is real for anti-Hermitian C.
  const cplx tr = rho.matrix().transpose().cwiseProduct(c).sum();
  return (cplx(0, 1) * tr).real();
}

double fd_differential_residual(const HamiltonianFunction& h, const DensityMatrix& rho,
                                const HermitianOperator& direction, double eps) {
  require_dim(h.dim(), rho.dim(), "fd_differential_residual");
  require_dim(h.dim(), direction.dim(), "fd_differential_residual direction");
  if (!(eps >= 1e-7 && eps <= 1e-3)) throw InvariantViolation("fd_differential_residual: eps outside [1e-7, 1e-3]");
  if (std::abs(direction.matrix().trace()) > tolerance::trace)
    throw InvariantViolation("fd_differential_residual: direction is not traceless");
  const Matrix& r = rho.matrix();
  const Matrix& d = direction.matrix();
  // Both constructors throw when the perturbation leaves the cone.
  const DensityMatrix plus(Matrix(r + eps * d));
  const DensityMatrix minus(Matrix(r - eps * d));
  const double slope = (h.value(plus) - h.value(minus)) / (2.0 * eps);
  return std::abs(slope - pair(d, h.differential(rho).matrix()));
}

HamiltonianFunction shift_differential(const HamiltonianFunction& h, double c) {
  require_finite(c, "shift_differential");
  const int n = h.dim();
  HamiltonianFunction out(
      c == 0.0 ? h.label() : h.label() + "+shift", n,
      [v = h.value_, c](const Matrix& x) { return v(x) + c * x.trace().real(); },
      [d = h.differential_, c, n](const Matrix& x) -> Matrix { return d(x) + c * Matrix::Identity(n, n); });
  if (h.linear_) out.linear_ = *h.linear_ + c * HermitianOperator::identity(n);
  return out;
}

}  // namespace eqm
