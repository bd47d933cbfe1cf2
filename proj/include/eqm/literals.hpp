#ifndef EQM_LITERALS_HPP
#define EQM_LITERALS_HPP

// JSON forms shared by the config reader and the report writer.
//
//   matrix        [[[re, im], ...], ...]        row-major
//   state vector  [[re, im], ...]
//   hamiltonian   {"type": "linear", "A": M}
//                 {"type": "mean_field", "A": M, "B": M, "lambda": x}
//                 {"type": "polynomial", "terms": [{"coefficient": c, "factors": [M, ...]}, ...]}
//   observable    {"type": "constant", "A": M}
//                 {"type": "trace_scaled", "B": M, "A": M}     f(rho) = Tr(rho B) A
//   measure       {"support": [M, ...], "weights": [w, ...]}
//
// Every reader takes the field path of its argument and reports errors as
// ConfigError naming that path.

#include <string>

#include "json.hpp"

#include "eqm/hamiltonian.hpp"
#include "eqm/hilbert.hpp"
#include "eqm/observables.hpp"

namespace eqm {

using json = nlohmann::json;

class ConfigError : public Error {
 public:
  ConfigError(const std::string& path, const std::string& message)
      : Error(path.empty() ? message : path + ": " + message), path_(path) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

namespace literals {

/// Reads a matrix literal; dim > 0 also enforces its dimension.
Matrix read_matrix(const json& j, const std::string& path, int dim = 0);
Vector read_vector(const json& j, const std::string& path, int dim = 0);

HermitianOperator read_hermitian(const json& j, const std::string& path, int dim);
DensityMatrix read_density(const json& j, const std::string& path, int dim);
StateVector read_state(const json& j, const std::string& path, int dim);
HamiltonianSpec read_hamiltonian(const json& j, const std::string& path, int dim);
ObservableFunction read_observable(const json& j, const std::string& path, int dim);
StateMeasure read_measure(const json& j, const std::string& path, int dim);

json write_matrix(const Matrix& m);
json write_vector(const Vector& v);

}  // namespace literals
}  // namespace eqm

#endif  // EQM_LITERALS_HPP
