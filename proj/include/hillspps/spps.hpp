#pragma once

#include <stdexcept>
#include <vector>

#include "hillspps/grid.hpp"
#include "hillspps/problems.hpp"
#include "hillspps/types.hpp"

namespace hill {

/// Recursive integral families built at a fixed expansion point lambda*,
/// before any particular solution is known.  Both chains start from the
/// constant 1 and alternate the weights (q - lambda*) and 1/p, with
/// opposite parities:
///   x_tilde[n] = int x_tilde[n-1] (q - lambda*)   (odd n)
///                int x_tilde[n-1] / p             (even n)
///   x_plain[n] = int x_plain[n-1] / p             (odd n)
///                int x_plain[n-1] (q - lambda*)   (even n)
struct SeedCoefficients {
  Real lambda_star{};
  int order{};  // M: highest retained index
  std::vector<GridFunction<Real>> x_tilde;
  std::vector<GridFunction<Real>> x_plain;
};

SeedCoefficients build_seed_coefficients(const SLProblem& problem, Real lambda_star,
                                         int order);

/// Fundamental pair normalized at x = 0:
/// f1(0) = 1, f1'(0) = 0, f2(0) = 0, f2'(0) = 1.
struct SolutionPair {
  Real lambda{};
  GridFunction<Real> f1, f2, f1_prime, f2_prime;
};

/// Assemble the pair at the seed expansion point: f1 sums the even x_tilde
/// members, f2 = p(0) * sum of odd x_plain members.  Derivatives come from
/// the recursion parity (each even step differentiates to 1/p times its
/// predecessor), never from differencing.
SolutionPair seed_solutions(const SeedCoefficients& coeffs, const SLProblem& problem);

struct GroundState {
  GridFunction<Real> f, f_prime;
};

/// Combine a seed pair computed at a band edge (D = 2) into the periodic
/// nodeless eigenfunction f0 = f1 + alpha f2 with
/// alpha = (f2'(T) - f1(T)) / (2 f2(T)).
GroundState periodic_ground_solution(const SolutionPair& pair, const SLProblem& problem);

/// Recursive integral families generated by a nonvanishing solution f0 at
/// lambda_center:
///   x_tilde[n] =  int x_tilde[n-1] f0^2        (odd n)
///                -int x_tilde[n-1] / (p f0^2)  (even n)
///   x_plain[n] = -int x_plain[n-1] / (p f0^2)  (odd n)
///                 int x_plain[n-1] f0^2        (even n)
/// Members run up to index 2N + 1.  Scalar is Real for the band-edge chain
/// and Complex when f0 is the nodeless combination f1 + i f2 built at an
/// arbitrary real expansion point.
template <class Scalar>
struct MainCoefficients {
  Real lambda_center{};
  int order{};  // N
  std::vector<GridFunction<Scalar>> x_tilde;
  std::vector<GridFunction<Scalar>> x_plain;
  GridFunction<Scalar> f0, f0_prime;
};

template <class Scalar>
MainCoefficients<Scalar> build_main_coefficients(const GridFunction<Scalar>& f0,
                                                 const GridFunction<Scalar>& f0_prime,
                                                 const SLProblem& problem,
                                                 Real lambda_center, int order) {
  if (order < 1) throw std::invalid_argument("build_main_coefficients: order must be >= 1");
  detail::check_same_grid(f0.grid, problem.grid);

  GridFunction<Scalar> p_local{problem.grid, problem.p.values.template cast<Scalar>()};
  const auto weight_up = f0 * f0;
  const auto weight_down = reciprocal(p_local * weight_up);

  MainCoefficients<Scalar> out;
  out.lambda_center = lambda_center;
  out.order = order;
  out.f0 = f0;
  out.f0_prime = f0_prime;
  const auto one = constant<Scalar>(problem.grid, Scalar(1));
  out.x_tilde.reserve(2 * order + 2);
  out.x_plain.reserve(2 * order + 2);
  out.x_tilde.push_back(one);
  out.x_plain.push_back(one);
  for (int n = 1; n <= 2 * order + 1; ++n) {
    if (n % 2 == 1) {
      out.x_tilde.push_back(antiderivative(out.x_tilde.back() * weight_up));
      out.x_plain.push_back(-antiderivative(out.x_plain.back() * weight_down));
    } else {
      out.x_tilde.push_back(-antiderivative(out.x_tilde.back() * weight_down));
      out.x_plain.push_back(antiderivative(out.x_plain.back() * weight_up));
    }
  }
  return out;
}

/// Horner sum over the even-index members: sum_m family[2m] dl^m.
template <class Scalar>
GridFunction<Scalar> even_series(const std::vector<GridFunction<Scalar>>& family, Real dl) {
  Index last = Index(family.size()) - 1;
  if (last % 2 == 1) --last;
  GridFunction<Scalar> acc = family[last];
  for (Index k = last - 2; k >= 0; k -= 2) {
    acc.values = acc.values * Scalar(dl) + family[k].values;
  }
  return acc;
}

/// Horner sum over the odd-index members: sum_m family[2m+1] dl^m.  This is
/// the deflated form of the odd series: the x_tilde variant enters the
/// solution formulas multiplied by one explicit power of dl, and the
/// deflation is what keeps the partner solutions finite at dl = 0.
template <class Scalar>
GridFunction<Scalar> odd_series(const std::vector<GridFunction<Scalar>>& family, Real dl) {
  Index last = Index(family.size()) - 1;
  if (last % 2 == 0) --last;
  GridFunction<Scalar> acc = family[last];
  for (Index k = last - 2; k >= 1; k -= 2) {
    acc.values = acc.values * Scalar(dl) + family[k].values;
  }
  return acc;
}

/// Reject evaluations whose last retained term still contributes more than
/// tol::series_tail of the partial sum at x = T.
template <class Scalar>
void check_series_tail(const std::vector<GridFunction<Scalar>>& family, Real dl,
                       const GridFunction<Scalar>& total, bool even_part) {
  Index last = Index(family.size()) - 1;
  if ((last % 2 == 0) != even_part) --last;
  const Real power = Real(last / 2);
  const Real term = std::abs(family[last].back()) * std::pow(std::abs(dl), power);
  const Real scale = std::max(Real(1), std::abs(total.back()));
  if (term > tol::series_tail * scale)
    throw std::runtime_error("series budget exceeded: increase the truncation order");
}

/// Fundamental pair at arbitrary lambda from one nonvanishing f0.
SolutionPair fundamental_solutions(const MainCoefficients<Real>& coeffs,
                                   const SLProblem& problem, Real lambda);

}  // namespace hill
