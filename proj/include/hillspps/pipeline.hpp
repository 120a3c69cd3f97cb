#pragma once

#include "hillspps/discriminant.hpp"
#include "hillspps/problems.hpp"
#include "hillspps/spps.hpp"

namespace hill {

/// Everything the band-edge route produces along the way, kept together so
/// spectrum, Bloch and Darboux queries reuse one set of coefficients.
struct BandEdgeData {
  SLProblem problem;
  Real lambda0{};
  GroundState ground;
  MainCoefficients<Real> coefficients;
  DiscriminantSeries series;
};

/// Full pipeline: locate lambda0 through the general-center series, build
/// the periodic nodeless ground solution there, then the coefficient
/// families and the band-edge discriminant series.
BandEdgeData analyze_band_edge(const SLProblem& problem,
                               int order = defaults::series_order);

}  // namespace hill
