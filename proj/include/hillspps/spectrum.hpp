#pragma once

#include <utility>
#include <vector>

#include "hillspps/discriminant.hpp"
#include "hillspps/spps.hpp"
#include "hillspps/types.hpp"

namespace hill {

enum class Boundary { periodic, antiperiodic };

inline const char* to_string(Boundary b) {
  return b == Boundary::periodic ? "periodic" : "antiperiodic";
}

struct Eigenvalue {
  int index{};
  Real value{};
  Boundary boundary{};  // periodic roots solve D = 2, antiperiodic D = -2
};

struct Interval {
  Real lo{}, hi{};
};

struct BandStructure {
  std::vector<Interval> stable;    // |D| <= 2
  std::vector<Interval> unstable;  // |D| > 2
  Interval scan_range{};
};

struct BlochData {
  Real lambda{};
  Complex alpha_plus{}, alpha_minus{};
  Complex beta_plus{}, beta_minus{};
};

/// First `count` band edges at or above the series center, ordered upward.
/// Roots of D - 2 are periodic eigenvalues, roots of D + 2 antiperiodic;
/// touching bands yield coincident pairs.
std::vector<Eigenvalue> eigenvalues(const DiscriminantSeries& series, int count);

/// All band edges inside [lambda_min, lambda_max], same conventions.
std::vector<Eigenvalue> eigenvalues_in_range(const DiscriminantSeries& series,
                                             Real lambda_min, Real lambda_max);

/// Partition of [lambda_min, lambda_max] into stability intervals, split at
/// the band edges and classified by the sign of |D| - 2 at midpoints.
BandStructure band_structure(const DiscriminantSeries& series, Real lambda_min,
                             Real lambda_max);

/// Floquet multipliers beta = (D -+ sqrt(D^2 - 4)) / 2 with the principal
/// square root: +i sqrt(4 - D^2) inside bands, positive real in gaps.
std::pair<Complex, Complex> bloch_factors(Real discriminant_value);

/// Self-matching combinations F = f1 + alpha f2 with F(x + T) = beta F(x).
/// alpha solves f2(T) a^2 + (f1(T) - f2'(T)) a - f1'(T) = 0; each beta is
/// the endpoint ratio F(T)/F(0), cross-checked against bloch_factors.
BlochData self_matching(const SolutionPair& pair, const SLProblem& problem);

/// Quasiperiodic Bloch solution beta^n F(x - nT) for nT <= x < (n+1)T, with
/// F linearly interpolated between grid nodes.  branch is +1 or -1.
Complex bloch_solution(const BlochData& data, const SolutionPair& pair, Real x,
                       int branch);

}  // namespace hill
