#include "hillspps/problems.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <utility>

#include <json.hpp>

namespace hill {

using json = nlohmann::json;

Real FourierSeries::operator()(Real x, Real period) const {
  const Real w = 2 * kPi / period;
  Real v = a0;
  for (std::size_t k = 0; k < cos_coeffs.size(); ++k)
    v += cos_coeffs[k] * std::cos(w * Real(k + 1) * x);
  for (std::size_t k = 0; k < sin_coeffs.size(); ++k)
    v += sin_coeffs[k] * std::sin(w * Real(k + 1) * x);
  return v;
}

FourierSeries FourierSeries::derivative(Real period) const {
  const Real w = 2 * kPi / period;
  FourierSeries d;
  d.a0 = 0;
  d.cos_coeffs.resize(sin_coeffs.size());
  d.sin_coeffs.resize(cos_coeffs.size());
  for (std::size_t k = 0; k < sin_coeffs.size(); ++k)
    d.cos_coeffs[k] = w * Real(k + 1) * sin_coeffs[k];
  for (std::size_t k = 0; k < cos_coeffs.size(); ++k)
    d.sin_coeffs[k] = -w * Real(k + 1) * cos_coeffs[k];
  return d;
}

namespace {

void validate_coefficient(const GridFunction<Real>& v, const std::string& label, Real period) {
  const Real scale = std::max(Real(1), v.max_abs());
  if (std::abs(v.back() - v.front()) > tol::periodicity * scale)
    throw std::runtime_error(label + " is not T-periodic: endpoint values differ");
  // Jump heuristic: a smooth coefficient changes by O(|v'| h) between
  // neighbours; a discontinuity changes by O(range) regardless of h.
  const Real range = v.values.maxCoeff() - v.values.minCoeff();
  const Real bound = 200 * (1 + range) / period;
  const Real h = v.grid.spacing();
  for (Index i = 0; i + 1 < v.values.size(); ++i) {
    if (std::abs(v.values[i + 1] - v.values[i]) > bound * h)
      throw std::runtime_error(label + " looks discontinuous on the grid");
  }
}

}  // namespace

SLProblem make_problem(std::string name, Real period, std::function<Real(Real)> p,
                       std::function<Real(Real)> q, std::function<Real(Real)> p_prime,
                       Index n_points) {
  SLProblem prob;
  prob.name = std::move(name);
  prob.period = period;
  prob.grid = make_grid(period, n_points);
  prob.p_fn = std::move(p);
  prob.q_fn = std::move(q);
  prob.p_prime_fn = std::move(p_prime);
  prob.p = sample(prob.grid, prob.p_fn);
  prob.q = sample(prob.grid, prob.q_fn);
  if (prob.p_prime_fn) prob.p_prime = sample(prob.grid, prob.p_prime_fn);
  if (!(prob.p.values.minCoeff() > Real(0)))
    throw std::runtime_error("p is not positive on [0, T]");
  validate_coefficient(prob.p, "p", period);
  validate_coefficient(prob.q, "q", period);
  return prob;
}

SLProblem make_problem(std::string name, Real period, FourierSeries p, FourierSeries q,
                       Index n_points) {
  const FourierSeries dp = p.derivative(period);
  auto prob = make_problem(
      std::move(name), period, [p, period](Real x) { return p(x, period); },
      [q, period](Real x) { return q(x, period); },
      [dp, period](Real x) { return dp(x, period); }, n_points);
  prob.p_series = std::move(p);
  prob.q_series = std::move(q);
  return prob;
}

SLProblem mathieu(Real r, Index n_points) {
  if (!std::isfinite(r)) throw std::invalid_argument("mathieu: r must be finite");
  // q = 2 r cos 2x over T = pi is the k = 1 cosine harmonic.  The period is
  // kept double-representable so config round-trips are exact.
  std::ostringstream label;
  label << "mathieu r=" << double(r);
  return make_problem(label.str(), Real(3.141592653589793), FourierSeries{1, {}, {}},
                      FourierSeries{0, {2 * r}, {}}, n_points);
}

SLProblem constant_problem(Real p0, Real q0, Real period, Index n_points) {
  if (!(p0 > Real(0))) throw std::invalid_argument("constant_problem: p0 must be positive");
  std::ostringstream label;
  label << "constant p=" << double(p0) << " q=" << double(q0);
  return make_problem(label.str(), period, FourierSeries{p0, {}, {}},
                      FourierSeries{q0, {}, {}}, n_points);
}

SLProblem free_problem(Index n_points) {
  auto prob = constant_problem(1, 0, Real(3.141592653589793), n_points);
  prob.name = "free";
  return prob;
}

namespace {

FourierSeries parse_coefficient(const json& node, const std::string& label) {
  if (node.is_number()) return FourierSeries{Real(node.get<double>()), {}, {}};
  if (node.is_object()) {
    FourierSeries s;
    s.a0 = Real(node.value("a0", 0.0));
    for (const auto& v : node.value("a", json::array())) s.cos_coeffs.push_back(Real(v.get<double>()));
    for (const auto& v : node.value("b", json::array())) s.sin_coeffs.push_back(Real(v.get<double>()));
    return s;
  }
  throw std::runtime_error("config: " + label + " must be a number or a Fourier object");
}

json coefficient_to_json(const FourierSeries& s) {
  if (s.cos_coeffs.empty() && s.sin_coeffs.empty()) return double(s.a0);
  json node;
  node["a0"] = double(s.a0);
  node["a"] = json::array();
  node["b"] = json::array();
  for (Real v : s.cos_coeffs) node["a"].push_back(double(v));
  for (Real v : s.sin_coeffs) node["b"].push_back(double(v));
  return node;
}

}  // namespace

SLProblem from_config(const std::string& text, Index n_points) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("config: malformed document: ") + e.what());
  }
  if (!doc.is_object()) throw std::runtime_error("config: top-level value must be an object");

  if (doc.contains("problem")) {
    const std::string which = doc["problem"].get<std::string>();
    if (which == "mathieu") return mathieu(Real(doc.value("r", 1.0)), n_points);
    if (which == "free") return free_problem(n_points);
    if (which == "constant")
      return constant_problem(Real(doc.value("p0", 1.0)), Real(doc.value("q0", 0.0)),
                              Real(doc.value("T", 3.141592653589793)), n_points);
    throw std::runtime_error("config: unknown built-in problem '" + which + "'");
  }

  if (!doc.contains("T")) throw std::runtime_error("config: missing period T");
  const Real period = Real(doc["T"].get<double>());

  auto pick = [&doc](const char* key, const char* alias) -> const json* {
    if (doc.contains(key)) return &doc[key];
    if (doc.contains(alias)) return &doc[alias];
    return nullptr;
  };
  const json* p_node = pick("p", "p_fourier");
  const json* q_node = pick("q", "q_fourier");
  if (!p_node || !q_node) throw std::runtime_error("config: both p and q must be given");

  const std::string name = doc.value("name", std::string("config"));
  return make_problem(name, period, parse_coefficient(*p_node, "p"),
                      parse_coefficient(*q_node, "q"), n_points);
}

std::string to_config(const SLProblem& problem) {
  if (!problem.p_series || !problem.q_series)
    throw std::runtime_error("to_config: problem was not built from coefficient descriptors");
  json doc;
  doc["name"] = problem.name;
  doc["T"] = double(problem.period);
  doc["p"] = coefficient_to_json(*problem.p_series);
  doc["q"] = coefficient_to_json(*problem.q_series);
  return doc.dump(2);
}

namespace {

// Dormand-Prince 5(4) tableau.
constexpr Real kA21 = 1.0L / 5;
constexpr Real kA31 = 3.0L / 40, kA32 = 9.0L / 40;
constexpr Real kA41 = 44.0L / 45, kA42 = -56.0L / 15, kA43 = 32.0L / 9;
constexpr Real kA51 = 19372.0L / 6561, kA52 = -25360.0L / 2187, kA53 = 64448.0L / 6561,
               kA54 = -212.0L / 729;
constexpr Real kA61 = 9017.0L / 3168, kA62 = -355.0L / 33, kA63 = 46732.0L / 5247,
               kA64 = 49.0L / 176, kA65 = -5103.0L / 18656;
constexpr Real kB1 = 35.0L / 384, kB3 = 500.0L / 1113, kB4 = 125.0L / 192,
               kB5 = -2187.0L / 6784, kB6 = 11.0L / 84;
constexpr Real kE1 = 35.0L / 384 - 5179.0L / 57600, kE3 = 500.0L / 1113 - 7571.0L / 16695,
               kE4 = 125.0L / 192 - 393.0L / 640, kE5 = -2187.0L / 6784 + 92097.0L / 339200,
               kE6 = 11.0L / 84 - 187.0L / 2100, kE7 = -1.0L / 40;

using State = Eigen::Array<Real, 4, 1>;

}  // namespace

OracleEndpoints ode_oracle(const SLProblem& problem, Real lambda, Real tolerance) {
  // State (u1, v1, u2, v2) with v = p u'; integrating v instead of u' keeps
  // the right-hand side free of p'.
  auto rhs = [&](Real x, const State& y) {
    const Real pinv = 1 / problem.p_fn(x);
    const Real w = problem.q_fn(x) - lambda;
    State d;
    d[0] = y[1] * pinv;
    d[1] = w * y[0];
    d[2] = y[3] * pinv;
    d[3] = w * y[2];
    return d;
  };

  const Real T = problem.period;
  Real x = 0;
  State y;
  y << 1, 0, 0, problem.p_fn(Real(0));
  Real h = T / 200;
  State k1 = rhs(x, y);
  const Real h_min = T * Real(1e-17L);

  while (x < T) {
    if (h < h_min) throw std::runtime_error("ode_oracle: step size underflow");
    if (x + h > T) h = T - x;
    const State k2 = rhs(x + h * kA21, y + h * (kA21 * k1));
    const State k3 = rhs(x + h * (3.0L / 10), y + h * (kA31 * k1 + kA32 * k2));
    const State k4 = rhs(x + h * (4.0L / 5), y + h * (kA41 * k1 + kA42 * k2 + kA43 * k3));
    const State k5 =
        rhs(x + h * (8.0L / 9), y + h * (kA51 * k1 + kA52 * k2 + kA53 * k3 + kA54 * k4));
    const State k6 =
        rhs(x + h, y + h * (kA61 * k1 + kA62 * k2 + kA63 * k3 + kA64 * k4 + kA65 * k5));
    const State y_new = y + h * (kB1 * k1 + kB3 * k3 + kB4 * k4 + kB5 * k5 + kB6 * k6);
    const State k7 = rhs(x + h, y_new);
    const State err_vec =
        h * (kE1 * k1 + kE3 * k3 + kE4 * k4 + kE5 * k5 + kE6 * k6 + kE7 * k7);

    Real err = 0;
    for (int i = 0; i < 4; ++i) {
      const Real scale = tolerance + tolerance * std::max(std::abs(y[i]), std::abs(y_new[i]));
      err = std::max(err, std::abs(err_vec[i]) / scale);
    }

    if (err <= 1) {
      x += h;
      y = y_new;
      k1 = k7;  // first-same-as-last
    }
    const Real factor = Real(0.9) * std::pow(std::max(err, Real(1e-30L)), Real(-0.2L));
    h *= std::clamp(factor, Real(0.2), Real(5.0));
  }

  const Real pT = problem.p_fn(T);
  return {y[0], y[1] / pT, y[2], y[3] / pT};
}

std::function<Real(Real)> lagrange_interpolant(const GridFunction<Real>& f) {
  const Grid grid = f.grid;
  // Copy the samples so the interpolant owns its data.
  Column<Real> vals = f.values;
  return [grid, vals](Real x) -> Real {
    const Index n = grid.n_points;
    const Real h = grid.spacing();
    const Real u = x / h;
    constexpr Index stencil = 6;
    Index i0 = Index(std::floor(u)) - stencil / 2 + 1;
    i0 = std::clamp(i0, Index(0), n - stencil);
    Real acc = 0;
    for (Index j = i0; j < i0 + stencil; ++j) {
      Real w = 1;
      for (Index m = i0; m < i0 + stencil; ++m) {
        if (m == j) continue;
        w *= (u - Real(m)) / Real(j - m);
      }
      acc += w * vals[j];
    }
    return acc;
  };
}

}  // namespace hill
