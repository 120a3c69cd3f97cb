#include "hillspps/pipeline.hpp"

namespace hill {

BandEdgeData analyze_band_edge(const SLProblem& problem, int order) {
  BandEdgeData data;
  data.problem = problem;
  data.lambda0 = find_lambda0(problem, order);
  const auto seeds = build_seed_coefficients(problem, data.lambda0, 2 * order + 1);
  const auto pair = seed_solutions(seeds, problem);
  data.ground = periodic_ground_solution(pair, problem);
  data.coefficients = build_main_coefficients(data.ground.f, data.ground.f_prime, problem,
                                              data.lambda0, order);
  data.series = discriminant_series(data.coefficients);
  return data;
}

}  // namespace hill
