#pragma once

#include <vector>

#include "hillspps/problems.hpp"
#include "hillspps/spps.hpp"
#include "hillspps/types.hpp"

namespace hill {

enum class SeriesForm {
  band_edge,       // centered at lambda0, leading coefficient exactly 2
  general_center,  // centered at an arbitrary lambda*
};

/// Truncated power series D_N(lambda) = sum c_n (lambda - center)^n for the
/// trace of the period map.  |D| <= 2 marks the stability bands.
struct DiscriminantSeries {
  Real lambda_center{};
  SeriesForm form{};
  std::vector<Real> coefficients;  // c_0 .. c_N

  int order() const { return int(coefficients.size()) - 1; }
};

/// Band-edge form: c_n = x_tilde[2n](T) + x_plain[2n](T).  Requires the
/// generating f0 to be T-periodic (that is what collapses the generic
/// three-term expression to this one).
DiscriminantSeries discriminant_series(const MainCoefficients<Real>& coeffs);

/// General-center form built from the complex nodeless combination
/// f* = f1 + i f2 of the seed solutions at lambda*:
///   c_n = (f*(T)/f*(0)) x_tilde[2n](T) + (f*(0)/f*(T)) x_plain[2n](T)
///         + (f*'(0) f*(T) - f*(0) f*'(T)) p(0) x_plain[2n+1](T).
/// Coefficients are real up to a checked residue.
DiscriminantSeries discriminant_series_star(const SLProblem& problem, Real lambda_star,
                                            int order = defaults::series_order);

Real eval(const DiscriminantSeries& series, Real lambda);
Real eval_derivative(const DiscriminantSeries& series, Real lambda);

/// Whether the truncation still resolves D at this lambda: the last term
/// must be negligible against the series value.
bool within_budget(const DiscriminantSeries& series, Real lambda);

struct Bounds {
  Real lower{}, upper{};
};

/// lower = min q (D > 2 holds for every lambda at or below it); upper is the
/// Rayleigh quotient of the periodic problem with trial function u = 1,
/// i.e. the mean of q.
Bounds lambda0_bounds(const SLProblem& problem);

/// First zero of D(lambda) - 2, scanning the star-form series built at
/// lower - 1 across [lower - 1, upper] and bisecting the first sign change.
Real find_lambda0(const SLProblem& problem, int order = defaults::series_order);

}  // namespace hill
