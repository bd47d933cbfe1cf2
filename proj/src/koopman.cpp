#include "eqm/koopman.hpp"

#include <algorithm>
#include <cmath>
#include <span>

#include <boost/math/special_functions/legendre.hpp>

namespace eqm::koopman {

namespace {

PhasePoint rotate(const HarmonicOscillator& ho, PhasePoint m, double t) {
  const double c = std::cos(ho.omega * t);
  const double s = std::sin(ho.omega * t);
  return {m.q * c + m.p * s, -m.q * s + m.p * c};
}

PhasePoint leapfrog(const Pendulum& pd, PhasePoint m, double t) {
  if (t == 0.0) return m;
  const int n = static_cast<int>(std::ceil(std::abs(t) / pendulum_step - 1e-9));
  const double h = t / n;
  double q = m.q;
  double p = m.p;
  for (int k = 0; k < n; ++k) {
    p -= 0.5 * h * pd.g * std::sin(q);
    q += h * p;
    p -= 0.5 * h * pd.g * std::sin(q);
  }
  return {q, p};
}

cplx pairwise_sum(std::span<const cplx> xs) {
  if (xs.size() <= 8) {
    cplx s = 0.0;
    for (const cplx& x : xs) s += x;
    return s;
  }
  const std::size_t half = xs.size() / 2;
  return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

void require_finite(cplx v) {
  if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
    throw InvariantViolation("koopman: non-finite observable value at a quadrature node");
}

}  // namespace

PhasePoint advance(const SymplecticFlow& flow, PhasePoint m, double t) {
  return std::visit(
      [&](const auto& f) {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, HarmonicOscillator>)
          return rotate(f, m, t);
        else
          return leapfrog(f, m, t);
      },
      flow);
}

double energy(const SymplecticFlow& flow, PhasePoint m) {
  return std::visit(
      [&](const auto& f) {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, HarmonicOscillator>)
          return 0.5 * f.omega * (m.q * m.q + m.p * m.p);
        else
          return 0.5 * m.p * m.p - f.g * std::cos(m.q);
      },
      flow);
}

ClassicalObservable::ClassicalObservable(std::string label, Map map) : label_(std::move(label)), map_(std::move(map)) {
  if (!map_) throw InvariantViolation("ClassicalObservable: empty map");
}

ClassicalObservable gaussian(double q0, double p0, double width) {
  if (!(width > 0.0)) throw InvariantViolation("gaussian: width must be positive");
  const double inv = 1.0 / (2.0 * width * width);
  return ClassicalObservable("gaussian", [q0, p0, inv](double q, double p) {
    const double dq = q - q0;
    const double dp = p - p0;
    return cplx(std::exp(-(dq * dq + dp * dp) * inv), 0.0);
  });
}

ClassicalObservable coordinate_q() {
  return ClassicalObservable("q", [](double q, double) { return cplx(q, 0.0); });
}

ClassicalObservable coordinate_p() {
  return ClassicalObservable("p", [](double, double p) { return cplx(p, 0.0); });
}

ClassicalObservable coordinate_q2() {
  return ClassicalObservable("q2", [](double q, double) { return cplx(q * q, 0.0); });
}

ClassicalObservable constant(cplx c) {
  return ClassicalObservable("constant", [c](double, double) { return c; });
}

Quadrature gauss_legendre_square(double half_width, int nodes_per_axis) {
  if (!(half_width > 0.0) || nodes_per_axis < 2) throw InvariantViolation("quadrature: bad grid parameters");
  // Nonnegative roots of P_n; the rule is symmetric about 0.
  const auto roots = boost::math::legendre_p_zeros<double>(nodes_per_axis);
  std::vector<double> x;
  std::vector<double> w;
  for (double r : roots) {
    const double dp = boost::math::legendre_p_prime<double>(nodes_per_axis, r);
    const double weight = 2.0 / ((1.0 - r * r) * dp * dp);
    if (r == 0.0) {
      x.push_back(0.0);
      w.push_back(weight);
    } else {
      x.push_back(r);
      w.push_back(weight);
      x.push_back(-r);
      w.push_back(weight);
    }
  }
  std::vector<std::size_t> order(x.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });

  Quadrature quad;
  quad.half_width = half_width;
  quad.nodes_per_axis = nodes_per_axis;
  for (std::size_t i : order) {
    for (std::size_t j : order) {
      quad.nodes.push_back({half_width * x[i], half_width * x[j]});
      quad.weights.push_back(half_width * half_width * w[i] * w[j]);
    }
  }
  return quad;
}

ClassicalObservable compose(const ClassicalObservable& f, const SymplecticFlow& flow, double t) {
  if (t == 0.0) return f;
  return ClassicalObservable(f.label() + "@flow", [f, flow, t](double q, double p) {
    return f(advance(flow, {q, p}, t));
  });
}

cplx inner_product(const ClassicalObservable& f, const ClassicalObservable& g, const Quadrature& quad) {
  std::vector<cplx> terms(quad.nodes.size());
  for (std::size_t i = 0; i < quad.nodes.size(); ++i) {
    const cplx fv = f(quad.nodes[i]);
    const cplx gv = g(quad.nodes[i]);
    require_finite(fv);
    require_finite(gv);
    terms[i] = quad.weights[i] * (fv * std::conj(gv));
  }
  return pairwise_sum(terms);
}

UnitarityCheck unitarity_residual(const ClassicalObservable& f, const ClassicalObservable& g,
                                  const SymplecticFlow& flow, double t, const Quadrature& quad) {
  UnitarityCheck out;
  if (t == 0.0) return out;
  const std::size_t n = static_cast<std::size_t>(quad.nodes_per_axis);
  std::vector<cplx> before(quad.nodes.size());
  std::vector<cplx> after(quad.nodes.size());
  for (std::size_t i = 0; i < quad.nodes.size(); ++i) {
    const PhasePoint m = quad.nodes[i];
    const PhasePoint moved = advance(flow, m, t);
    const cplx f0 = f(m), g0 = g(m), f1 = f(moved), g1 = g(moved);
    require_finite(f0);
    require_finite(g0);
    require_finite(f1);
    require_finite(g1);
    before[i] = quad.weights[i] * f0 * std::conj(g0);
    after[i] = quad.weights[i] * f1 * std::conj(g1);
    const std::size_t row = i / n, col = i % n;
    const bool boundary = row == 0 || col == 0 || row + 1 == n || col + 1 == n;
    if (boundary && std::max({std::abs(f0), std::abs(g0), std::abs(f1), std::abs(g1)}) > 1e-8) out.mass_leak = true;
  }
  out.residual = std::abs(pairwise_sum(after) - pairwise_sum(before));
  return out;
}

double liouville_generator_residual(const ClassicalObservable& f, const SymplecticFlow& flow,
                                    const ClassicalObservable& hamiltonian, PhasePoint m, double dt) {
  if (!(dt >= 1e-6 && dt <= 1e-3)) throw InvariantViolation("liouville_generator_residual: dt outside [1e-6, 1e-3]");
  constexpr double h = 1e-5;
  const cplx time_derivative = (f(advance(flow, m, dt)) - f(advance(flow, m, -dt))) / (2.0 * dt);
  auto d_q = [&](const ClassicalObservable& o) { return (o(m.q + h, m.p) - o(m.q - h, m.p)) / (2.0 * h); };
  auto d_p = [&](const ClassicalObservable& o) { return (o(m.q, m.p + h) - o(m.q, m.p - h)) / (2.0 * h); };
  const cplx bracket = d_q(f) * d_p(hamiltonian) - d_p(f) * d_q(hamiltonian);
  return std::abs(time_derivative - bracket);
}

}  // namespace eqm::koopman
