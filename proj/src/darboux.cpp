#include "hillspps/darboux.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace hill {

namespace {

// Centered differences with periodic wrap-around; node n-1 repeats node 0,
// so the left neighbour of node 0 is node n-2 shifted by one period.
GridFunction<Real> periodic_derivative(const GridFunction<Real>& g) {
  const Index n = g.values.size();
  const Real two_h = 2 * g.grid.spacing();
  Column<Real> out(n);
  for (Index i = 1; i + 1 < n; ++i) out[i] = (g.values[i + 1] - g.values[i - 1]) / two_h;
  out[0] = (g.values[1] - g.values[n - 2]) / two_h;
  out[n - 1] = out[0];
  return {g.grid, std::move(out)};
}

void check_periodic(const GridFunction<Real>& f, const char* label) {
  const Real scale = std::max(Real(1), f.max_abs());
  if (std::abs(f.back() - f.front()) > tol::periodicity * scale)
    throw std::runtime_error(std::string(label) + " is not T-periodic");
}

}  // namespace

DarbouxPartner factorize(const SLProblem& problem, const GridFunction<Real>& f0,
                         const GridFunction<Real>& f0_prime) {
  detail::check_same_grid(f0.grid, problem.grid);
  if (!(f0.values.abs().minCoeff() > tol::divide_guard * f0.max_abs()))
    throw std::runtime_error("f0 has a node: factorization needs the ground eigenfunction");
  check_periodic(f0, "f0");

  DarbouxPartner partner;
  partner.problem = problem;
  partner.f0 = f0;
  partner.f0_prime = f0_prime;

  // Rayleigh quotient; exact when f0 is an eigenfunction of the periodic
  // problem, since the boundary term of the integration by parts vanishes.
  const auto pf2 = GridFunction<Real>{
      problem.grid, problem.p.values * f0_prime.values.square() +
                        problem.q.values * f0.values.square()};
  const auto norm2 = GridFunction<Real>{problem.grid, f0.values.square()};
  partner.lambda0 = antiderivative(pf2).back() / antiderivative(norm2).back();

  partner.sqrt_p = sqrt(problem.p);
  if (problem.p_prime) {
    partner.sqrt_p_prime = GridFunction<Real>{
        problem.grid, problem.p_prime->values / (2 * partner.sqrt_p.values)};
  } else {
    partner.sqrt_p_prime = periodic_derivative(partner.sqrt_p);
  }
  partner.sqrt_p_second = periodic_derivative(partner.sqrt_p_prime);

  const auto inv_f0 = reciprocal(f0);
  partner.phi = -(partner.sqrt_p * f0_prime * inv_f0);
  check_periodic(partner.phi, "superpotential");

  // Phi' without second differences: f0'' is recovered from the equation
  // itself, (p f0')' = (q - lambda0) f0, with p' = 2 sqrt(p) (sqrt(p))'.
  const auto p_prime_vals = 2 * partner.sqrt_p.values * partner.sqrt_p_prime.values;
  Column<Real> f0_second = ((problem.q.values - partner.lambda0) * f0.values -
                            p_prime_vals * f0_prime.values) /
                           problem.p.values;
  partner.phi_prime = GridFunction<Real>{
      problem.grid,
      -partner.sqrt_p_prime.values * f0_prime.values * inv_f0.values -
          partner.sqrt_p.values *
              (f0_second * f0.values - f0_prime.values.square()) *
              inv_f0.values.square()};

  partner.q_tilde = GridFunction<Real>{
      problem.grid, problem.q.values + 2 * partner.sqrt_p.values * partner.phi_prime.values -
                        partner.sqrt_p.values * partner.sqrt_p_second.values};
  check_periodic(partner.q_tilde, "partner potential");

  partner.f0_tilde = reciprocal(partner.sqrt_p * f0);

  // Factorization identity q = Phi^2 - (sqrt(p) Phi)' + lambda0, with the
  // derivative taken by centered differences at interior nodes.
  const auto sp_phi = partner.sqrt_p * partner.phi;
  const Real h2 = 2 * problem.grid.spacing();
  Real residual = 0;
  for (Index i = 1; i + 1 < f0.values.size(); ++i) {
    const Real d = (sp_phi.values[i + 1] - sp_phi.values[i - 1]) / h2;
    const Real lhs = partner.phi.values[i] * partner.phi.values[i] - d + partner.lambda0;
    residual = std::max(residual, std::abs(lhs - problem.q.values[i]));
  }
  if (residual > Real(1e-5L) * std::max(Real(1), problem.q.max_abs()))
    throw std::runtime_error("factorization residual too large: inconsistent inputs");

  SLProblem tilde = problem;
  tilde.name = problem.name + " partner";
  tilde.q = partner.q_tilde;
  tilde.q_fn = lagrange_interpolant(partner.q_tilde);
  tilde.q_series.reset();
  partner.problem_tilde = std::move(tilde);
  return partner;
}

GridFunction<Real> darboux_transform(const DarbouxPartner& partner,
                                     const GridFunction<Real>& f,
                                     const GridFunction<Real>& f_prime) {
  detail::check_same_grid(f.grid, partner.phi.grid);
  return partner.sqrt_p * f_prime + partner.phi * f;
}

SolutionPair partner_solutions(const DarbouxPartner& partner,
                               const MainCoefficients<Real>& coeffs, Real lambda) {
  const Real dl = lambda - coeffs.lambda_center;
  const auto& f0 = coeffs.f0;
  const auto& f0p = coeffs.f0_prime;
  const auto& sp = partner.sqrt_p;
  const auto& spp = partner.sqrt_p_prime;
  const auto& problem = partner.problem;

  const auto tilde_even = even_series(coeffs.x_tilde, dl);
  const auto tilde_odd = odd_series(coeffs.x_tilde, dl);  // (odd x_tilde sum) = Sigma~_1 / dl
  const auto plain_even = even_series(coeffs.x_plain, dl);
  const auto plain_odd = odd_series(coeffs.x_plain, dl);
  check_series_tail(coeffs.x_tilde, dl, tilde_even, true);
  check_series_tail(coeffs.x_tilde, dl, tilde_odd, false);
  check_series_tail(coeffs.x_plain, dl, plain_even, true);
  check_series_tail(coeffs.x_plain, dl, plain_odd, false);

  const auto inv_spf0 = reciprocal(sp * f0);
  const auto inv_pf02 = GridFunction<Real>{f0.grid, inv_spf0.values.square()};
  // (sqrt(p) f0)' / (p f0^2), the common logarithmic-derivative factor.
  const auto log_term = GridFunction<Real>{
      f0.grid, (spp.values * f0.values + sp.values * f0p.values) * inv_pf02.values};

  const Real sp_0 = sp.front();
  const Real f0_0 = f0.front();
  const Real k1 = sp_0 * f0_0;
  const Real k2 = (spp.front() - partner.phi.front()) / f0_0;

  // d/dx of (odd x_tilde sum / (sqrt(p) f0)) splits into the two terms of
  // `common`; the even x_plain sum differentiates to dl * f0^2 * plain_odd.
  const auto common = f0 * tilde_even / sp - tilde_odd * log_term;

  SolutionPair out;
  out.lambda = lambda;
  out.f2 = (sp_0 / f0_0) * (tilde_odd * inv_spf0);
  out.f2_prime = (sp_0 / f0_0) * common;
  out.f1 = k1 * (plain_even * inv_spf0) + k2 * (tilde_odd * inv_spf0);
  out.f1_prime =
      k1 * ((dl * (f0 * plain_odd)) / sp - plain_even * log_term) + k2 * common;
  (void)problem;
  return out;
}

DiscriminantSeries partner_discriminant(const DarbouxPartner& partner,
                                        const MainCoefficients<Real>& coeffs) {
  auto series = discriminant_series(coeffs);

  constexpr int probes = 16;
  const Real lo = series.lambda_center - 1;
  const Real hi = series.lambda_center + 30;
  for (int i = 0; i < probes; ++i) {
    const Real lam = lo + (hi - lo) * Real(i) / Real(probes - 1);
    const auto pair = partner_solutions(partner, coeffs, lam);
    const Real direct = pair.f1.back() + pair.f2_prime.back();
    if (std::abs(direct - eval(series, lam)) > Real(1e-6L))
      throw std::runtime_error("SUSY invariance violated: partner trace deviates from D");
  }
  return series;
}

GridFunction<Real> double_darboux(const DarbouxPartner& partner) {
  const auto& sp = partner.sqrt_p;
  const auto& spp = partner.sqrt_p_prime;
  const auto& f0 = partner.f0;
  const auto& f0p = partner.f0_prime;
  const auto& f0t = partner.f0_tilde;
  const auto& problem = partner.problem;

  // f0~' from the product form 1/(sqrt(p) f0), then Phi1 = -sqrt(p) f0~'/f0~.
  const auto inv_pf02 =
      GridFunction<Real>{f0.grid, Real(1) / (problem.p.values * f0.values.square())};
  const auto f0t_prime = GridFunction<Real>{
      f0.grid, -(spp.values * f0.values + sp.values * f0p.values) * inv_pf02.values};
  const auto phi1 = GridFunction<Real>{
      f0.grid, -problem.p.values * f0.values * f0t_prime.values};

  const Real scale = Real(1e-5L) * std::max(Real(1), problem.q.max_abs());
  const Real identity_defect =
      (phi1.values - (spp.values - partner.phi.values)).abs().maxCoeff();
  if (identity_defect > scale)
    throw std::runtime_error("involution check failed: Phi1 != (sqrt p)' - Phi");

  // Phi1' through the partner equation: (p f0~')' = (q~ - lambda0) f0~.
  const auto p_prime_vals = 2 * sp.values * spp.values;
  Column<Real> f0t_second = ((partner.q_tilde.values - partner.lambda0) * f0t.values -
                             p_prime_vals * f0t_prime.values) /
                            problem.p.values;
  const auto inv_f0t = reciprocal(f0t);
  Column<Real> phi1_prime =
      -spp.values * f0t_prime.values * inv_f0t.values -
      sp.values * (f0t_second * f0t.values - f0t_prime.values.square()) *
          inv_f0t.values.square();

  GridFunction<Real> q_twice{
      f0.grid, partner.q_tilde.values + 2 * sp.values * phi1_prime -
                   sp.values * partner.sqrt_p_second.values};

  if ((q_twice.values - problem.q.values).abs().maxCoeff() > scale)
    throw std::runtime_error("involution check failed: twice-transformed potential != q");
  return q_twice;
}

}  // namespace hill
