#include "hillspps/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hill {

namespace {

struct Root {
  Real lambda;
  Boundary boundary;
};

bool root_less(const Root& a, const Root& b) { return a.lambda < b.lambda; }

Real branch_target(Boundary b) { return b == Boundary::periodic ? Real(2) : Real(-2); }

Real bisect(const DiscriminantSeries& series, Real target, Real lo, Real hi, Real f_lo) {
  while (hi - lo > tol::root_bisection) {
    const Real mid = (lo + hi) / 2;
    const Real f_mid = eval(series, mid) - target;
    if ((f_lo > 0) == (f_mid > 0))
      lo = mid;
    else
      hi = mid;
  }
  return (lo + hi) / 2;
}

// Critical points of D (roots of D') located by sign change on a fine mesh.
// Extrema of the discriminant are separated by at least the band scale, so
// a mesh step of ~0.005 is far below their spacing.
std::vector<Real> critical_points(const DiscriminantSeries& series, Real a, Real b) {
  const Index points = std::max<Index>(512, Index((b - a) / Real(0.005L)) + 2);
  std::vector<Real> crit;
  Real prev_x = a;
  Real prev_d = eval_derivative(series, a);
  for (Index i = 1; i < points; ++i) {
    const Real x = a + (b - a) * Real(i) / Real(points - 1);
    const Real d = eval_derivative(series, x);
    if ((prev_d > 0) != (d > 0)) {
      Real lo = prev_x, hi = x, f_lo = prev_d;
      while (hi - lo > Real(1e-10L)) {
        const Real mid = (lo + hi) / 2;
        const Real f_mid = eval_derivative(series, mid);
        if ((f_lo > 0) == (f_mid > 0))
          lo = mid;
        else
          hi = mid;
      }
      crit.push_back((lo + hi) / 2);
    }
    prev_x = x;
    prev_d = d;
  }
  return crit;
}

// All band edges in [a, b]: D is monotone between consecutive critical
// points, so each segment is subscanned for sign changes of D -+ 2; an
// extremum that reaches to within tol::double_root of a branch line without
// crossing it is a touching band and contributes a coincident pair.
std::vector<Root> scan_roots(const DiscriminantSeries& series, Real a, Real b) {
  std::vector<Real> boundaries = critical_points(series, a, b);
  boundaries.insert(boundaries.begin(), a);
  boundaries.push_back(b);

  std::vector<Root> found;
  auto push_unique = [&found](Real lambda, Boundary boundary) {
    for (const Root& r : found) {
      if (r.boundary == boundary && std::abs(r.lambda - lambda) <= tol::root_dedup) return;
    }
    found.push_back({lambda, boundary});
  };

  constexpr Index sub = 16;
  for (std::size_t s = 0; s + 1 < boundaries.size(); ++s) {
    const Real u = boundaries[s];
    const Real v = boundaries[s + 1];
    if (!(v > u)) continue;
    for (Boundary branch : {Boundary::periodic, Boundary::antiperiodic}) {
      const Real target = branch_target(branch);
      Real prev_x = u;
      Real prev_f = eval(series, u) - target;
      for (Index i = 1; i <= sub; ++i) {
        const Real x = u + (v - u) * Real(i) / Real(sub);
        const Real f = eval(series, x) - target;
        if (prev_f != 0 && (prev_f > 0) != (f > 0))
          push_unique(bisect(series, target, prev_x, x, prev_f), branch);
        prev_x = x;
        prev_f = f;
      }
    }
  }

  // Touching bands: at an interior extremum that comes within
  // tol::double_root of a branch line, the two adjacent monotone segments
  // either resolved two distinct crossings (a narrow but genuine gap) or
  // produced nothing / a single noise-level root.  Only the former counts
  // as separate eigenvalues; anything else is the degenerate double root,
  // reported as a coincident pair at the extremum.
  for (std::size_t c = 1; c + 1 < boundaries.size(); ++c) {
    const Real le = boundaries[c];
    const Real d_le = eval(series, le);
    for (Boundary branch : {Boundary::periodic, Boundary::antiperiodic}) {
      const Real g = d_le - branch_target(branch);
      if (std::abs(g) > tol::double_root) continue;
      const Real window_lo = boundaries[c - 1];
      const Real window_hi = boundaries[c + 1];
      std::vector<std::size_t> nearby;
      for (std::size_t i = 0; i < found.size(); ++i) {
        if (found[i].boundary == branch && found[i].lambda > window_lo &&
            found[i].lambda < window_hi)
          nearby.push_back(i);
      }
      if (nearby.size() != 2) {
        for (auto it = nearby.rbegin(); it != nearby.rend(); ++it)
          found.erase(found.begin() + *it);
        found.push_back({le, branch});
        found.push_back({le, branch});
      }
    }
  }

  std::sort(found.begin(), found.end(), root_less);
  return found;
}

void require_budget(const DiscriminantSeries& series, Real lambda) {
  if (!within_budget(series, lambda))
    throw std::runtime_error("series truncation insufficient for the requested range");
}

}  // namespace

std::vector<Eigenvalue> eigenvalues(const DiscriminantSeries& series, int count) {
  if (count < 1) throw std::invalid_argument("eigenvalues: count must be >= 1");

  const Real center = series.lambda_center;
  std::vector<Root> at_center;
  const Real d0 = eval(series, center);
  if (std::abs(d0 - 2) <= Real(1e-9L))
    at_center.push_back({center, Boundary::periodic});
  else if (std::abs(d0 + 2) <= Real(1e-9L))
    at_center.push_back({center, Boundary::antiperiodic});

  // Widen the scan window geometrically until enough band edges are inside.
  // Each attempt rescans from scratch, which keeps window-boundary
  // artifacts of a previous attempt from surviving.
  std::vector<Root> roots;
  for (Real range = 8; ; range *= 2) {
    if (!within_budget(series, center + range))
      throw std::runtime_error("series truncation insufficient for the requested root count");
    roots = scan_roots(series, center, center + range);
    for (const Root& c : at_center) {
      bool already = false;
      for (const Root& r : roots)
        if (r.boundary == c.boundary && std::abs(r.lambda - c.lambda) <= tol::root_dedup)
          already = true;
      if (!already) roots.push_back(c);
    }
    std::sort(roots.begin(), roots.end(), root_less);
    if (int(roots.size()) >= count) break;
    if (range > Real(1e6))
      throw std::runtime_error("series truncation insufficient for the requested root count");
  }

  roots.resize(count);
  std::vector<Eigenvalue> out(count);
  for (int i = 0; i < count; ++i) out[i] = {i, roots[i].lambda, roots[i].boundary};
  return out;
}

std::vector<Eigenvalue> eigenvalues_in_range(const DiscriminantSeries& series,
                                             Real lambda_min, Real lambda_max) {
  if (!(lambda_min < lambda_max))
    throw std::invalid_argument("eigenvalues_in_range: empty range");
  require_budget(series, lambda_min);
  require_budget(series, lambda_max);
  std::vector<Eigenvalue> out;
  int index = 0;
  for (const Root& r : scan_roots(series, lambda_min, lambda_max))
    out.push_back({index++, r.lambda, r.boundary});
  return out;
}

BandStructure band_structure(const DiscriminantSeries& series, Real lambda_min,
                             Real lambda_max) {
  const auto edges = eigenvalues_in_range(series, lambda_min, lambda_max);

  std::vector<Real> cuts{lambda_min};
  for (const Eigenvalue& e : edges) {
    if (e.value > cuts.back() + tol::root_dedup && e.value < lambda_max - tol::root_dedup)
      cuts.push_back(e.value);
  }
  cuts.push_back(lambda_max);

  BandStructure bands;
  bands.scan_range = {lambda_min, lambda_max};
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const Real mid = (cuts[i] + cuts[i + 1]) / 2;
    const bool stable = std::abs(eval(series, mid)) <= 2;
    auto& list = stable ? bands.stable : bands.unstable;
    if (!list.empty() && std::abs(list.back().hi - cuts[i]) <= tol::root_dedup)
      list.back().hi = cuts[i + 1];  // merge through a degenerate touching edge
    else
      list.push_back({cuts[i], cuts[i + 1]});
  }
  return bands;
}

std::pair<Complex, Complex> bloch_factors(Real discriminant_value) {
  const Real d = discriminant_value;
  const Complex root = std::sqrt(Complex(d * d - 4));
  return {(Complex(d) - root) / Real(2), (Complex(d) + root) / Real(2)};
}

BlochData self_matching(const SolutionPair& pair, const SLProblem& problem) {
  (void)problem;
  const Real f1_T = pair.f1.back();
  const Real f2_T = pair.f2.back();
  const Real f1p_T = pair.f1_prime.back();
  const Real f2p_T = pair.f2_prime.back();

  if (std::abs(f2_T) <= tol::divide_guard * pair.f2.max_abs())
    throw std::runtime_error("degenerate quadratic: f2(T) vanishes at this lambda");

  const Real d = f1_T + f2p_T;
  // The quadratic's discriminant collapses to D^2 - 4 through the constant
  // Wronskian; using the closed form keeps the branch consistent with
  // bloch_factors.
  const Complex root = std::sqrt(Complex(d * d - 4));
  BlochData data;
  data.lambda = pair.lambda;
  data.alpha_plus = (Complex(f2p_T - f1_T) - root) / (2 * f2_T);
  data.alpha_minus = (Complex(f2p_T - f1_T) + root) / (2 * f2_T);

  const Real coeff_scale =
      std::max({std::abs(f2_T), std::abs(f1_T - f2p_T), std::abs(f1p_T), Real(1)});
  for (const Complex alpha : {data.alpha_plus, data.alpha_minus}) {
    const Complex quad = f2_T * alpha * alpha + (f1_T - f2p_T) * alpha - f1p_T;
    if (std::abs(quad) > Real(1e-8L) * coeff_scale * std::max(Real(1), std::norm(alpha)))
      throw std::runtime_error("self-matching quadratic residual too large");
  }
  // F(0) = 1 by the initial conditions, so beta is just F(T).
  data.beta_plus = Complex(f1_T) + data.alpha_plus * f2_T;
  data.beta_minus = Complex(f1_T) + data.alpha_minus * f2_T;

  const auto [closed_plus, closed_minus] = bloch_factors(d);
  const Real scale = std::max(Real(1), std::abs(closed_plus) + std::abs(closed_minus));
  if (std::abs(data.beta_plus - closed_plus) > tol::bloch_crosscheck * scale ||
      std::abs(data.beta_minus - closed_minus) > tol::bloch_crosscheck * scale)
    throw std::runtime_error("Bloch factor cross-check failed");
  const Real product_defect = std::abs(data.beta_plus * data.beta_minus - Real(1));
  if (product_defect > Real(1e-9L) * scale * scale)
    throw std::runtime_error("Bloch factors do not multiply to 1");
  return data;
}

Complex bloch_solution(const BlochData& data, const SolutionPair& pair, Real x, int branch) {
  if (branch != 1 && branch != -1)
    throw std::invalid_argument("bloch_solution: branch must be +1 or -1");
  const Complex alpha = branch == 1 ? data.alpha_plus : data.alpha_minus;
  const Complex beta = branch == 1 ? data.beta_plus : data.beta_minus;

  const Grid grid = pair.f1.grid;
  const Real T = grid.period;
  const long long n = (long long)std::floor(x / T);
  Real x0 = x - Real(n) * T;
  x0 = std::clamp(x0, Real(0), T);

  const Real u = x0 / grid.spacing();
  Index i = std::clamp(Index(std::floor(u)), Index(0), grid.n_points - 2);
  const Real w = u - Real(i);
  auto interp = [&](const GridFunction<Real>& f) {
    return (1 - w) * f.values[i] + w * f.values[i + 1];
  };
  const Complex F = Complex(interp(pair.f1)) + alpha * interp(pair.f2);

  Complex factor = 1;
  const Complex base = n >= 0 ? beta : Complex(1) / beta;
  for (long long m = std::llabs(n); m > 0; --m) factor *= base;
  return factor * F;
}

}  // namespace hill
