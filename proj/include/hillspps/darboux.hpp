#pragma once

#include "hillspps/discriminant.hpp"
#include "hillspps/problems.hpp"
#include "hillspps/spps.hpp"
#include "hillspps/types.hpp"

namespace hill {

/// Factorization data for -(p f')' + q f = lambda f around its ground
/// eigenfunction: superpotential Phi = -sqrt(p) f0'/f0, partner potential
/// q~ = q + 2 sqrt(p) Phi' - sqrt(p) (sqrt(p))'', partner ground solution
/// f0~ = 1 / (sqrt(p) f0).  All three inherit the period of the input.
struct DarbouxPartner {
  GridFunction<Real> phi;
  GridFunction<Real> q_tilde;
  SLProblem problem_tilde;
  GridFunction<Real> f0_tilde;

  // Inputs and intermediates the partner-side formulas keep reusing.
  SLProblem problem;
  Real lambda0{};
  GridFunction<Real> f0, f0_prime;
  GridFunction<Real> sqrt_p, sqrt_p_prime, sqrt_p_second;
  GridFunction<Real> phi_prime;
};

/// Build the factorization from a T-periodic nodeless f0.  The eigenvalue
/// it belongs to is recovered internally as the Rayleigh quotient of f0.
DarbouxPartner factorize(const SLProblem& problem, const GridFunction<Real>& f0,
                         const GridFunction<Real>& f0_prime);

/// First-order map f -> sqrt(p) f' + Phi f sending solutions at lambda to
/// partner solutions at the same lambda (and annihilating f0).
GridFunction<Real> darboux_transform(const DarbouxPartner& partner,
                                     const GridFunction<Real>& f,
                                     const GridFunction<Real>& f_prime);

/// Normalized fundamental pair of the partner problem, assembled directly
/// from the original coefficient families.  The odd x_tilde series enters
/// deflated by its explicit power of (lambda - center), so lambda may equal
/// the center.
SolutionPair partner_solutions(const DarbouxPartner& partner,
                               const MainCoefficients<Real>& coeffs, Real lambda);

/// The partner's discriminant, which coincides with the original one:
/// returns the band-edge series and verifies the identity by probing
/// f1~(T) + f2~'(T) against it across the series range.
DiscriminantSeries partner_discriminant(const DarbouxPartner& partner,
                                        const MainCoefficients<Real>& coeffs);

/// Apply the factorization again, from the partner's own ground solution.
/// Returns the twice-transformed potential and checks the involution:
/// Phi1 = (sqrt(p))' - Phi and q~~ = q.
GridFunction<Real> double_darboux(const DarbouxPartner& partner);

}  // namespace hill
