#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hillspps/grid.hpp"
#include "hillspps/types.hpp"

namespace hill {

/// Truncated Fourier series v(x) = a0 + sum_k a_k cos(2 pi k x / T)
///                                     + sum_k b_k sin(2 pi k x / T),
/// with k starting at 1 (cos_coeffs[0] is the k = 1 cosine amplitude).
struct FourierSeries {
  Real a0{};
  std::vector<Real> cos_coeffs;
  std::vector<Real> sin_coeffs;

  Real operator()(Real x, Real period) const;
  FourierSeries derivative(Real period) const;
};

/// Periodic Sturm-Liouville data for -(p f')' + q f = lambda f on [0, T],
/// with T-periodic p > 0 and q.  Coefficients are carried both as callables
/// (for the adaptive ODE oracle) and as samples on the working grid.
struct SLProblem {
  std::string name;
  Real period{};
  std::function<Real(Real)> p_fn;
  std::function<Real(Real)> q_fn;
  std::function<Real(Real)> p_prime_fn;  // empty when no analytic derivative is known
  Grid grid{};
  GridFunction<Real> p, q;
  std::optional<GridFunction<Real>> p_prime;
  // Present only for problems defined through coefficient descriptors;
  // required for config round-trips.
  std::optional<FourierSeries> p_series, q_series;

  bool has_p_prime() const { return static_cast<bool>(p_prime_fn); }
};

SLProblem make_problem(std::string name, Real period, std::function<Real(Real)> p,
                       std::function<Real(Real)> q,
                       std::function<Real(Real)> p_prime = nullptr,
                       Index n_points = defaults::grid_points);

SLProblem make_problem(std::string name, Real period, FourierSeries p, FourierSeries q,
                       Index n_points = defaults::grid_points);

/// p = 1, q = 2 r cos(2x) on [0, pi].
SLProblem mathieu(Real r, Index n_points = defaults::grid_points);

/// p = p0, q = q0 on [0, T].
SLProblem constant_problem(Real p0, Real q0, Real period,
                           Index n_points = defaults::grid_points);

/// p = 1, q = 0 on [0, pi].
SLProblem free_problem(Index n_points = defaults::grid_points);

/// Parse a JSON problem description (schema in the README): either
///   {"problem": "mathieu", "r": 1.0}  /  {"problem": "free"}  /
///   {"problem": "constant", "p0": .., "q0": .., "T": ..}
/// or explicit coefficients
///   {"T": .., "p": <number|fourier>, "q": <number|fourier>}
/// where <fourier> is {"a0": .., "a": [..], "b": [..]}.
SLProblem from_config(const std::string& text, Index n_points = defaults::grid_points);

/// Serialize a descriptor-backed problem to the config format.
std::string to_config(const SLProblem& problem);

struct OracleEndpoints {
  Real f1, f1_prime, f2, f2_prime;
  Real discriminant() const { return f1 + f2_prime; }
};

/// Endpoint values of the normalized fundamental pair, obtained
/// independently of any series machinery: adaptive Dormand-Prince
/// integration of u' = v/p, v' = (q - lambda) u across [0, T].
OracleEndpoints ode_oracle(const SLProblem& problem, Real lambda,
                           Real tolerance = Real(1e-11L));

/// Degree-5 local Lagrange interpolant through the sampled values; used to
/// hand grid-only coefficients (e.g. a computed partner potential) to the
/// adaptive oracle.
std::function<Real(Real)> lagrange_interpolant(const GridFunction<Real>& f);

}  // namespace hill
