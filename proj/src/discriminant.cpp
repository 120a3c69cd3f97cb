#include "hillspps/discriminant.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hill {

DiscriminantSeries discriminant_series(const MainCoefficients<Real>& coeffs) {
  const auto& f0 = coeffs.f0;
  if (std::abs(f0.back() - f0.front()) > tol::periodicity * f0.max_abs())
    throw std::runtime_error("f0 not periodic: band-edge discriminant form does not apply");

  DiscriminantSeries series;
  series.lambda_center = coeffs.lambda_center;
  series.form = SeriesForm::band_edge;
  series.coefficients.resize(coeffs.order + 1);
  for (int n = 0; n <= coeffs.order; ++n)
    series.coefficients[n] = coeffs.x_tilde[2 * n].back() + coeffs.x_plain[2 * n].back();
  if (std::abs(series.coefficients[0] - 2) > Real(1e-9L))
    throw std::runtime_error("discriminant series lost its normalization c0 = 2");
  return series;
}

DiscriminantSeries discriminant_series_star(const SLProblem& problem, Real lambda_star,
                                            int order) {
  const auto seeds = build_seed_coefficients(problem, lambda_star, 2 * order + 1);
  const auto pair = seed_solutions(seeds, problem);
  const auto f_star = combine_complex(pair.f1, pair.f2);
  const auto f_star_prime = combine_complex(pair.f1_prime, pair.f2_prime);

  if (!(f_star.values.abs().minCoeff() > tol::divide_guard * f_star.max_abs()))
    throw std::runtime_error("f* has a node: seed solutions degenerated numerically");

  const auto coeffs =
      build_main_coefficients(f_star, f_star_prime, problem, lambda_star, order);

  const Complex ratio = f_star.back() / f_star.front();
  const Complex wronskian_like =
      (f_star_prime.front() * f_star.back() - f_star.front() * f_star_prime.back()) *
      Complex(problem.p.front());

  std::vector<Complex> raw(order + 1);
  for (int n = 0; n <= order; ++n) {
    raw[n] = ratio * coeffs.x_tilde[2 * n].back() +
             coeffs.x_plain[2 * n].back() / ratio +
             wronskian_like * coeffs.x_plain[2 * n + 1].back();
  }

  Real scale = 1;
  for (const Complex& c : raw) scale = std::max(scale, std::abs(c));
  DiscriminantSeries series;
  series.lambda_center = lambda_star;
  series.form = SeriesForm::general_center;
  series.coefficients.resize(order + 1);
  for (int n = 0; n <= order; ++n) {
    if (std::abs(raw[n].imag()) > tol::im_residue * scale)
      throw std::runtime_error(
          "general-center discriminant coefficients are not real: numerical breakdown");
    series.coefficients[n] = raw[n].real();
  }
  return series;
}

Real eval(const DiscriminantSeries& series, Real lambda) {
  const Real dl = lambda - series.lambda_center;
  Real acc = series.coefficients.back();
  for (Index n = Index(series.coefficients.size()) - 2; n >= 0; --n)
    acc = acc * dl + series.coefficients[n];
  return acc;
}

Real eval_derivative(const DiscriminantSeries& series, Real lambda) {
  const Real dl = lambda - series.lambda_center;
  const Index last = Index(series.coefficients.size()) - 1;
  if (last == 0) return 0;
  Real acc = Real(last) * series.coefficients[last];
  for (Index n = last - 1; n >= 1; --n) acc = acc * dl + Real(n) * series.coefficients[n];
  return acc;
}

bool within_budget(const DiscriminantSeries& series, Real lambda) {
  const Real dl = lambda - series.lambda_center;
  const Real last_term = std::abs(series.coefficients.back()) *
                         std::pow(std::abs(dl), Real(series.order()));
  const Real scale = std::max(Real(2), std::abs(eval(series, lambda)));
  return last_term <= tol::series_tail * scale;
}

Bounds lambda0_bounds(const SLProblem& problem) {
  const Real lower = problem.q.values.minCoeff();
  const Real upper = antiderivative(problem.q).back() / problem.period;
  return {lower, upper};
}

Real find_lambda0(const SLProblem& problem, int order) {
  const Bounds bounds = lambda0_bounds(problem);
  const Real lambda_star = bounds.lower - 1;
  const auto series = discriminant_series_star(problem, lambda_star, order);

  auto excess = [&series](Real lam) { return eval(series, lam) - 2; };

  // Scan one mesh step past the upper bound: when the trial function is the
  // actual eigenfunction (constant q) the Rayleigh bound is attained and
  // lambda0 sits exactly at `upper`.
  constexpr int mesh_points = 2000;
  const Real step = (bounds.upper - lambda_star) / Real(mesh_points - 1);
  Real prev_lambda = lambda_star;
  Real prev_value = excess(prev_lambda);
  Real lo = 0, hi = 0;
  bool bracketed = false;
  for (int i = 1; i <= mesh_points; ++i) {
    const Real lam = lambda_star + step * Real(i);
    const Real value = excess(lam);
    if (prev_value > 0 && value <= 0) {
      lo = prev_lambda;
      hi = lam;
      bracketed = true;
      break;
    }
    prev_lambda = lam;
    prev_value = value;
  }
  if (!bracketed)
    throw std::runtime_error(
        "no sign change found for D - 2: raise the truncation order or the scan mesh");

  while (hi - lo > tol::root_bisection) {
    const Real mid = (lo + hi) / 2;
    if (excess(mid) > 0)
      lo = mid;
    else
      hi = mid;
  }
  return (lo + hi) / 2;
}

}  // namespace hill
