#pragma once

#include <span>
#include <vector>

#include "smoothq/sample.hpp"

namespace smoothq {

/// Smoothing weights below this threshold behave like h = 0: the linear
/// extension 2t/h of the generalized inverse would overflow, so the pure
/// quantile path is taken instead (including its z-range check).
inline constexpr double kTinySmoothing = 1e-300;

/// Parameter pair selecting one member of the estimator family.
/// h >= 0 is the smoothing weight; z shifts the target level.
/// h = 0 requires z in (-1,1) so that the quantile order (1-z)/2 is proper.
struct SmoothingParams {
  double z;
  double h;
  SmoothingParams(double z, double h);
};

/// Sample criterion (1/n) sum |Y_i-q| - z(Y_i-q) + (h/2)(Y_i-q)^2.
/// Convex in q; its minimizer is estimate().
double objective(const Sample& s, double q, const SmoothingParams& p);

/// Derivative of the criterion: 2 Fhat(q) - 1 + z + h(q - mean), with Fhat
/// the right-continuous empirical cdf (ties counted with multiplicity).
/// Nondecreasing in q; changes sign at the minimizer.
double score(const Sample& s, double q, const SmoothingParams& p);

/// The minimizer qhat(z,h): generalized inverse of G(q) = Fhat(q) + (h/2)q
/// at level (1 - z + h*mean)/2, i.e. inf{ q : G(q) >= level }.
///
/// Internally the search runs on deviations from the sample mean, which
/// makes the result exactly shift-equivariant; crossings inside a jump of
/// Fhat return the order statistic itself, crossings on a flat of Fhat
/// solve the linear piece, and levels outside [G(Y_(1)), G(Y_(n))] use the
/// linear extension of G (slope h/2 with Fhat frozen at 0 or 1).
/// For h = 0 this is the order statistic Y_(ceil(n(1-z)/2)).
/// O(log n) on the pre-sorted sample.
double estimate(const Sample& s, const SmoothingParams& p);

/// estimate() over a grid of smoothing weights at fixed z, reusing the one
/// sorted sample. Element i equals estimate(s, {z, h_grid[i]}).
/// Throws DomainError on an empty grid.
std::vector<double> estimate_path(const Sample& s, double z,
                                  std::span<const double> h_grid);

}  // namespace smoothq
