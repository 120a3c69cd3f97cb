#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>

#include "hillspps/types.hpp"

namespace hill {

/// Uniform grid over one period [0, T].  The node count is odd so that the
/// cumulative Simpson rule below closes a whole panel at every even node.
struct Grid {
  Real period{};
  Index n_points{};

  Real spacing() const { return period / Real(n_points - 1); }
  Real node(Index i) const { return period * (Real(i) / Real(n_points - 1)); }

  Column<Real> nodes() const {
    Column<Real> x(n_points);
    for (Index i = 0; i < n_points; ++i) x[i] = node(i);
    return x;
  }

  friend bool operator==(const Grid&, const Grid&) = default;
};

inline Grid make_grid(Real period, Index n_points) {
  if (!(period > Real(0)) || !std::isfinite(period))
    throw std::invalid_argument("make_grid: period must be positive and finite");
  if (n_points < 3 || n_points % 2 == 0)
    throw std::invalid_argument("make_grid: n_points must be odd and at least 3");
  return Grid{period, n_points};
}

/// Real- or complex-valued function sampled on a shared uniform grid.
/// Immutable by convention: every operation below returns a fresh value.
template <class Scalar>
struct GridFunction {
  Grid grid{};
  Column<Scalar> values{};

  Scalar front() const { return values[0]; }
  Scalar back() const { return values[values.size() - 1]; }
  Real max_abs() const { return values.abs().maxCoeff(); }
};

namespace detail {

template <class Scalar>
bool all_finite(const Column<Scalar>& v) {
  if constexpr (std::is_same_v<Scalar, Complex>) {
    return v.real().allFinite() && v.imag().allFinite();
  } else {
    return v.allFinite();
  }
}

inline void check_same_grid(const Grid& a, const Grid& b) {
  if (!(a == b)) throw std::invalid_argument("grid mismatch between operands");
}

}  // namespace detail

template <class Scalar, class Fn>
GridFunction<Scalar> sample_as(const Grid& grid, Fn&& fn) {
  Column<Scalar> v(grid.n_points);
  for (Index i = 0; i < grid.n_points; ++i) v[i] = fn(grid.node(i));
  if (!detail::all_finite(v))
    throw std::runtime_error("sample: function returned a non-finite value at a grid node");
  return {grid, std::move(v)};
}

template <class Fn>
GridFunction<Real> sample(const Grid& grid, Fn&& fn) {
  return sample_as<Real>(grid, std::forward<Fn>(fn));
}

template <class Scalar>
GridFunction<Scalar> constant(const Grid& grid, Scalar value) {
  return {grid, Column<Scalar>::Constant(grid.n_points, value)};
}

inline GridFunction<Complex> to_complex(const GridFunction<Real>& f) {
  return {f.grid, f.values.template cast<Complex>()};
}

inline GridFunction<Complex> combine_complex(const GridFunction<Real>& re,
                                             const GridFunction<Real>& im) {
  detail::check_same_grid(re.grid, im.grid);
  Column<Complex> v(re.values.size());
  for (Index i = 0; i < v.size(); ++i) v[i] = Complex(re.values[i], im.values[i]);
  return {re.grid, std::move(v)};
}

/// Cumulative antiderivative G(x_i) ~ int_0^{x_i} g, by composite Simpson
/// panels over [x_{2k}, x_{2k+2}].  Odd nodes carry the 3-point half-panel
/// value h/12*(5 g_{2k} + 8 g_{2k+1} - g_{2k+2}), so every node holds a
/// valid cumulative integral; even nodes are exact for cubics.
template <class Scalar>
GridFunction<Scalar> antiderivative(const GridFunction<Scalar>& g) {
  const auto& v = g.values;
  const Real h = g.grid.spacing();
  Column<Scalar> out(v.size());
  out[0] = Scalar(0);
  for (Index k = 0; k + 2 < v.size(); k += 2) {
    out[k + 1] = out[k] + (h / 12) * (Real(5) * v[k] + Real(8) * v[k + 1] - v[k + 2]);
    out[k + 2] = out[k] + (h / 3) * (v[k] + Real(4) * v[k + 1] + v[k + 2]);
  }
  if (!detail::all_finite(out))
    throw std::runtime_error("antiderivative: cumulative integral overflowed");
  return {g.grid, std::move(out)};
}

/// Elementwise 1/f.  Refuses inputs that vanish anywhere on the grid: a
/// value below tol::divide_guard * max|f| is indistinguishable from a node
/// of f, which the SPPS recursions cannot tolerate.
template <class Scalar>
GridFunction<Scalar> reciprocal(const GridFunction<Scalar>& f) {
  const Real floor = tol::divide_guard * f.max_abs();
  if (!(f.values.abs().minCoeff() > floor))
    throw std::runtime_error("near-vanishing denominator: function has a node on [0, T]");
  return {f.grid, f.values.inverse()};
}

inline GridFunction<Real> sqrt(const GridFunction<Real>& f) {
  if (!(f.values.minCoeff() >= Real(0)))
    throw std::runtime_error("sqrt: negative values on the grid");
  return {f.grid, f.values.sqrt()};
}

template <class Scalar, class Fn>
GridFunction<Scalar> map(const GridFunction<Scalar>& f, Fn&& fn) {
  Column<Scalar> v(f.values.size());
  for (Index i = 0; i < v.size(); ++i) v[i] = fn(f.values[i]);
  return {f.grid, std::move(v)};
}

template <class Scalar>
GridFunction<Scalar> operator*(const GridFunction<Scalar>& a, const GridFunction<Scalar>& b) {
  detail::check_same_grid(a.grid, b.grid);
  return {a.grid, a.values * b.values};
}

template <class Scalar>
GridFunction<Scalar> operator/(const GridFunction<Scalar>& a, const GridFunction<Scalar>& b) {
  return a * reciprocal(b);
}

template <class Scalar>
GridFunction<Scalar> operator+(const GridFunction<Scalar>& a, const GridFunction<Scalar>& b) {
  detail::check_same_grid(a.grid, b.grid);
  return {a.grid, a.values + b.values};
}

template <class Scalar>
GridFunction<Scalar> operator-(const GridFunction<Scalar>& a, const GridFunction<Scalar>& b) {
  detail::check_same_grid(a.grid, b.grid);
  return {a.grid, a.values - b.values};
}

template <class Scalar>
GridFunction<Scalar> operator-(const GridFunction<Scalar>& a) {
  return {a.grid, -a.values};
}

template <class Scalar>
GridFunction<Scalar> operator*(Scalar s, const GridFunction<Scalar>& f) {
  return {f.grid, s * f.values};
}

template <class Scalar>
GridFunction<Scalar> operator*(const GridFunction<Scalar>& f, Scalar s) {
  return {f.grid, f.values * s};
}

inline GridFunction<Complex> operator*(Complex s, const GridFunction<Real>& f) {
  return {f.grid, f.values.template cast<Complex>() * s};
}

template <class Scalar>
GridFunction<Scalar> operator+(const GridFunction<Scalar>& f, Scalar s) {
  return {f.grid, f.values + s};
}

}  // namespace hill
