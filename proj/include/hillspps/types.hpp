#pragma once

#include <complex>

#include <Eigen/Core>

namespace hill {

// Extended-precision scalars throughout the core.  The discriminant
// polynomial is routinely evaluated 30+ units away from its expansion
// center, where the alternating terms peak near 1e8 before cancelling
// down to O(1); double-precision coefficient rounding alone leaves an
// absolute residue of ~1e-8 there, while 80-bit scalars keep it below
// 1e-10.
using Real = long double;
using Complex = std::complex<Real>;
using Index = Eigen::Index;

template <class Scalar>
using Column = Eigen::Array<Scalar, Eigen::Dynamic, 1>;

inline constexpr Real kPi = 3.141592653589793238462643383279502884L;

namespace defaults {
inline constexpr Index grid_points = 7001;
inline constexpr int series_order = 100;
}  // namespace defaults

namespace tol {
// Reciprocal guard: values with |v| below this fraction of max|v| count as
// nodes of the function being inverted.
inline constexpr Real divide_guard = 1e-12L;
// Periodicity defect |f(T) - f(0)| allowed for a nominally T-periodic
// function, relative to max|f|.
inline constexpr Real periodicity = 1e-6L;
// Relative size of the last retained series term at x = T beyond which a
// truncated SPPS evaluation is rejected.
inline constexpr Real series_tail = 1e-12L;
// Lambda resolution of bisected band-edge roots.
inline constexpr Real root_bisection = 1e-12L;
// |D(extremum)| - 2 window inside which a band is treated as touching its
// neighbour (degenerate double eigenvalue).
inline constexpr Real double_root = 1e-7L;
// Distance below which two located roots of the same branch are the same
// eigenvalue.
inline constexpr Real root_dedup = 1e-9L;
// Allowed imaginary residue of general-center discriminant coefficients,
// relative to the coefficient scale.
inline constexpr Real im_residue = 1e-9L;
// Agreement required between Bloch factors computed as endpoint ratios and
// from the closed form in the discriminant.
inline constexpr Real bloch_crosscheck = 1e-8L;
}  // namespace tol

}  // namespace hill
