#include "eqm/literals.hpp"

#include <cmath>

namespace eqm::literals {

namespace {

const json& field(const json& j, const std::string& path, const char* name) {
  if (!j.is_object()) throw ConfigError(path, "expected an object");
  auto it = j.find(name);
  if (it == j.end()) throw ConfigError(path, std::string("missing field '") + name + "'");
  return *it;
}

std::string sub(const std::string& path, const char* name) { return path.empty() ? name : path + "." + name; }
std::string idx(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

double read_number(const json& j, const std::string& path) {
  if (!j.is_number()) throw ConfigError(path, "expected a number");
  const double x = j.get<double>();
  if (!std::isfinite(x)) throw ConfigError(path, "non-finite number");
  return x;
}

cplx read_complex(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2) throw ConfigError(path, "expected a [re, im] pair");
  return {read_number(j[0], idx(path, 0)), read_number(j[1], idx(path, 1))};
}

template <typename F>
auto wrap(const std::string& path, F&& make) {
  try {
    return make();
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(path, e.what());
  }
}

}  // namespace

Matrix read_matrix(const json& j, const std::string& path, int dim) {
  if (!j.is_array() || j.empty()) throw ConfigError(path, "expected a non-empty array of rows");
  const auto n = j.size();
  if (dim > 0 && n != static_cast<std::size_t>(dim))
    throw ConfigError(path, "has " + std::to_string(n) + " rows, dimension is " + std::to_string(dim));
  Matrix m(n, n);
  for (std::size_t r = 0; r < n; ++r) {
    const json& row = j[r];
    if (!row.is_array() || row.size() != n)
      throw ConfigError(idx(path, r), "expected a row of " + std::to_string(n) + " [re, im] pairs");
    for (std::size_t c = 0; c < n; ++c) m(r, c) = read_complex(row[c], idx(idx(path, r), c));
  }
  return m;
}

Vector read_vector(const json& j, const std::string& path, int dim) {
  if (!j.is_array() || j.empty()) throw ConfigError(path, "expected a non-empty array of [re, im] pairs");
  if (dim > 0 && j.size() != static_cast<std::size_t>(dim))
    throw ConfigError(path, "has " + std::to_string(j.size()) + " entries, dimension is " + std::to_string(dim));
  Vector v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v(i) = read_complex(j[i], idx(path, i));
  return v;
}

HermitianOperator read_hermitian(const json& j, const std::string& path, int dim) {
  Matrix m = read_matrix(j, path, dim);
  return wrap(path, [&] { return HermitianOperator(std::move(m)); });
}

DensityMatrix read_density(const json& j, const std::string& path, int dim) {
  Matrix m = read_matrix(j, path, dim);
  return wrap(path, [&] { return DensityMatrix(std::move(m)); });
}

StateVector read_state(const json& j, const std::string& path, int dim) {
  Vector v = read_vector(j, path, dim);
  return wrap(path, [&] { return StateVector(std::move(v)); });
}

HamiltonianSpec read_hamiltonian(const json& j, const std::string& path, int dim) {
  const json& type = field(j, path, "type");
  if (!type.is_string()) throw ConfigError(sub(path, "type"), "expected a string");
  const auto t = type.get<std::string>();
  if (t == "linear") return LinearSpec{read_hermitian(field(j, path, "A"), sub(path, "A"), dim)};
  if (t == "mean_field") {
    return MeanFieldSpec{read_hermitian(field(j, path, "A"), sub(path, "A"), dim),
                         read_hermitian(field(j, path, "B"), sub(path, "B"), dim),
                         read_number(field(j, path, "lambda"), sub(path, "lambda"))};
  }
  if (t == "polynomial") {
    const std::string tp = sub(path, "terms");
    const json& terms = field(j, path, "terms");
    if (!terms.is_array()) throw ConfigError(tp, "expected an array");
    PolynomialSpec spec{dim, {}};
    for (std::size_t k = 0; k < terms.size(); ++k) {
      const std::string kp = idx(tp, k);
      PolynomialTerm term;
      term.coefficient = read_number(field(terms[k], kp, "coefficient"), sub(kp, "coefficient"));
      const json& factors = field(terms[k], kp, "factors");
      if (!factors.is_array()) throw ConfigError(sub(kp, "factors"), "expected an array");
      for (std::size_t i = 0; i < factors.size(); ++i)
        term.factors.push_back(read_hermitian(factors[i], idx(sub(kp, "factors"), i), dim));
      spec.terms.push_back(std::move(term));
    }
    return spec;
  }
  throw ConfigError(sub(path, "type"), "unknown hamiltonian type '" + t + "'");
}

ObservableFunction read_observable(const json& j, const std::string& path, int dim) {
  const json& type = field(j, path, "type");
  if (!type.is_string()) throw ConfigError(sub(path, "type"), "expected a string");
  const auto t = type.get<std::string>();
  if (t == "constant") return constant_observable(read_hermitian(field(j, path, "A"), sub(path, "A"), dim));
  if (t == "trace_scaled") {
    return trace_scaled_observable(read_hermitian(field(j, path, "B"), sub(path, "B"), dim),
                                   read_hermitian(field(j, path, "A"), sub(path, "A"), dim));
  }
  throw ConfigError(sub(path, "type"), "unknown observable type '" + t + "'");
}

StateMeasure read_measure(const json& j, const std::string& path, int dim) {
  const json& support = field(j, path, "support");
  const json& weights = field(j, path, "weights");
  if (!support.is_array()) throw ConfigError(sub(path, "support"), "expected an array");
  if (!weights.is_array()) throw ConfigError(sub(path, "weights"), "expected an array");
  std::vector<DensityMatrix> points;
  for (std::size_t i = 0; i < support.size(); ++i)
    points.push_back(read_density(support[i], idx(sub(path, "support"), i), dim));
  std::vector<double> w;
  for (std::size_t i = 0; i < weights.size(); ++i) w.push_back(read_number(weights[i], idx(sub(path, "weights"), i)));
  return wrap(path, [&] { return StateMeasure(std::move(points), std::move(w)); });
}

json write_matrix(const Matrix& m) {
  json out = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
    out.push_back(std::move(row));
  }
  return out;
}

json write_vector(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back({v(i).real(), v(i).imag()});
  return out;
}

}  // namespace eqm::literals
