#include "hillspps/spps.hpp"

#include <cmath>
#include <stdexcept>

namespace hill {

SeedCoefficients build_seed_coefficients(const SLProblem& problem, Real lambda_star,
                                         int order) {
  if (order < 1) throw std::invalid_argument("build_seed_coefficients: order must be >= 1");
  const auto weight_q = GridFunction<Real>{problem.grid, problem.q.values - lambda_star};
  const auto weight_p = reciprocal(problem.p);

  SeedCoefficients out;
  out.lambda_star = lambda_star;
  out.order = order;
  const auto one = constant<Real>(problem.grid, 1);
  out.x_tilde.reserve(order + 1);
  out.x_plain.reserve(order + 1);
  out.x_tilde.push_back(one);
  out.x_plain.push_back(one);
  for (int n = 1; n <= order; ++n) {
    if (n % 2 == 1) {
      out.x_tilde.push_back(antiderivative(out.x_tilde.back() * weight_q));
      out.x_plain.push_back(antiderivative(out.x_plain.back() * weight_p));
    } else {
      out.x_tilde.push_back(antiderivative(out.x_tilde.back() * weight_p));
      out.x_plain.push_back(antiderivative(out.x_plain.back() * weight_q));
    }
  }
  return out;
}

SolutionPair seed_solutions(const SeedCoefficients& coeffs, const SLProblem& problem) {
  const Grid grid = problem.grid;
  detail::check_same_grid(coeffs.x_tilde.front().grid, grid);
  const int M = coeffs.order;
  const Real p0 = problem.p.front();

  Column<Real> f1 = Column<Real>::Zero(grid.n_points);
  Column<Real> f1p = Column<Real>::Zero(grid.n_points);
  Column<Real> f2 = Column<Real>::Zero(grid.n_points);
  Column<Real> f2p = Column<Real>::Zero(grid.n_points);

  // f1 sums even x_tilde members; each even member differentiates back to
  // its odd predecessor over p, so f1' sums the odd members through M - 2.
  for (int n = 0; n <= M; n += 2) f1 += coeffs.x_tilde[n].values;
  for (int n = 1; n <= M - 2; n += 2) f1p += coeffs.x_tilde[n].values;
  // f2 = p(0) * sum of odd x_plain members; their derivatives are the even
  // predecessors over p.
  for (int n = 1; n <= M; n += 2) f2 += coeffs.x_plain[n].values;
  for (int n = 0; n <= M - 1; n += 2) f2p += coeffs.x_plain[n].values;

  SolutionPair pair;
  pair.lambda = coeffs.lambda_star;
  pair.f1 = {grid, std::move(f1)};
  pair.f1_prime = {grid, f1p / problem.p.values};
  pair.f2 = {grid, p0 * f2};
  pair.f2_prime = {grid, p0 * f2p / problem.p.values};
  return pair;
}

GroundState periodic_ground_solution(const SolutionPair& pair, const SLProblem& problem) {
  const Real f1_T = pair.f1.back();
  const Real f2_T = pair.f2.back();
  const Real f2p_T = pair.f2_prime.back();

  Real alpha;
  if (std::abs(f2_T) <= tol::divide_guard * pair.f2.max_abs()) {
    // Coexistence case: both Floquet solutions periodic.  Accept only the
    // degenerate form with a vanishing mismatch, otherwise refuse.
    if (std::abs(f2p_T - f1_T) <= tol::periodicity * std::max(Real(1), pair.f1.max_abs()))
      alpha = 0;
    else
      throw std::runtime_error("f2(T) vanishes at the expansion point");
  } else {
    alpha = (f2p_T - f1_T) / (2 * f2_T);
  }

  GroundState ground;
  ground.f = pair.f1 + alpha * pair.f2;
  ground.f_prime = pair.f1_prime + alpha * pair.f2_prime;

  const Real scale = ground.f.max_abs();
  if (std::abs(ground.f.back() - ground.f.front()) > tol::periodicity * scale)
    throw std::runtime_error("not a band edge: solution is not T-periodic");
  if (!(ground.f.values.abs().minCoeff() > tol::divide_guard * scale))
    throw std::runtime_error("ground solution has a node on [0, T]");
  (void)problem;
  return ground;
}

SolutionPair fundamental_solutions(const MainCoefficients<Real>& coeffs,
                                   const SLProblem& problem, Real lambda) {
  const Real dl = lambda - coeffs.lambda_center;
  const auto& f0 = coeffs.f0;
  const auto& f0p = coeffs.f0_prime;
  const Real p0 = problem.p.front();
  const Real f0_0 = f0.front();
  const Real f0p_0 = f0p.front();

  const auto tilde_even = even_series(coeffs.x_tilde, dl);
  const auto tilde_odd = odd_series(coeffs.x_tilde, dl);
  const auto plain_even = even_series(coeffs.x_plain, dl);
  const auto plain_odd = odd_series(coeffs.x_plain, dl);
  check_series_tail(coeffs.x_tilde, dl, tilde_even, true);
  check_series_tail(coeffs.x_tilde, dl, tilde_odd, false);
  check_series_tail(coeffs.x_plain, dl, plain_even, true);
  check_series_tail(coeffs.x_plain, dl, plain_odd, false);

  const auto inv_pf0 = reciprocal(GridFunction<Real>{f0.grid, problem.p.values * f0.values});

  SolutionPair pair;
  pair.lambda = lambda;
  pair.f1 = (Real(1) / f0_0) * (f0 * tilde_even) + (p0 * f0p_0) * (f0 * plain_odd);
  pair.f2 = (-p0 * f0_0) * (f0 * plain_odd);
  // d/dx of the even sums is -dl * (odd sum) / (p f0^2); combined with the
  // product rule this gives derivative fields without any differencing.
  const auto bracket = f0p * plain_odd - plain_even * inv_pf0;
  pair.f1_prime = (Real(1) / f0_0) * (f0p * tilde_even) -
                  (dl / f0_0) * (tilde_odd * inv_pf0) + (p0 * f0p_0) * bracket;
  pair.f2_prime = (-p0 * f0_0) * bracket;
  return pair;
}

}  // namespace hill
