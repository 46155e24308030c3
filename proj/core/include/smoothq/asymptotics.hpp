#pragma once

#include "smoothq/distributions.hpp"
#include "smoothq/estimator.hpp"

namespace smoothq {

/// Coefficients of the asymptotic variance along the constant-tau line,
/// v(tau,h) = (a + b h + c h^2) / (d + h)^2 with
///   a = 4 tau (1-tau)
///   b = 2 [ E|Y - F^{-1}(tau)| - (mean - F^{-1}(tau)) (1 - 2 tau) ]
///   c = Var(Y)
///   d = 2 f(F^{-1}(tau))
struct VarianceCoefficients {
  double a;
  double b;
  double c;
  double d;
  double tau;
};

/// Behaviour of h -> v(tau,h) on [0, inf), decided by the signs of
/// bd - 2a (derivative at 0) and 2cd - b (derivative slope at infinity).
enum class EfficiencyCase {
  increasing_from_zero,  // v minimal at h = 0, increasing thereafter
  monotone_decreasing,   // v strictly decreasing toward Var(Y)
  finite_optimum,        // interior stationary point at h = (2a-bd)/(2cd-b)
  boundary_flat,         // derivative vanishes at h = 0; no gain from h > 0
};

/// Optimal smoothing level, h^*. "infinite" is a genuine sentinel: the
/// variance limit Var(Y) is approached but never attained (the estimator
/// drifts to the mean), so it is never represented as IEEE infinity.
struct OptimalSmoothing {
  enum class Kind { zero, finite, infinite };
  Kind kind;
  double value;  // the smoothing level when kind == finite, else unused

  bool is_zero() const noexcept { return kind == Kind::zero; }
  bool is_finite() const noexcept { return kind == Kind::finite; }
  bool is_infinite() const noexcept { return kind == Kind::infinite; }
};

/// Everything the efficiency analysis says about one quantile level.
struct EfficiencyReport {
  double tau;
  OptimalSmoothing h_star;
  double v_at_zero;    // v(tau, 0), the classical quantile variance
  double v_at_opt;     // v at h_star; the limit Var(Y) when h_star is infinite
  double ratio;        // v_at_opt / v_at_zero
  EfficiencyCase classification;
  bool v_opt_attained;  // false iff v_at_opt is the unattained h->inf limit
};

/// Both sides of the quantile-vs-mean efficiency comparison
/// tau(1-tau)/f(m)^2 < Var(Y), evaluated at the distribution's location
/// parameter (= the mean for the symmetric models).
struct EfficiencyComparison {
  bool quantile_more_efficient;
  double quantile_variance;  // tau(1-tau)/f(m)^2
  double mean_variance;      // Var(Y)
  double tau;                // F at the comparison point
};

/// Population minimizer q(z,h): the unique root of
/// F(q) + (h/2) q = (1 - z + h m)/2, by bracketed bisection refined with
/// Newton steps (residual driven to ~1e-15). For h = 0 this is the
/// population quantile of order (1-z)/2, and z must lie in (-1,1).
double population_minimizer(const DistributionModel& d,
                            const SmoothingParams& p);

/// The z that keeps the target quantile at F^{-1}(tau) for a given h:
/// z(tau,h) = 1 - 2 tau + h (m - F^{-1}(tau)). Throws DomainError unless
/// tau in (0,1) and h >= 0.
double z_of_tau(const DistributionModel& d, double tau, double h);

/// Closed-form coefficients at quantile level tau in (0,1).
VarianceCoefficients variance_coefficients(const DistributionModel& d,
                                           double tau);

/// CLT variance at arbitrary (z,h):
/// B(z,h) / (2 f(q) + h)^2 with q = q(z,h) and
/// B = 4F(q)(1-F(q)) + 2h[E|Y-q| - (m-q)(1-2F(q))] + h^2 Var(Y).
double asymptotic_variance(const DistributionModel& d,
                           const SmoothingParams& p);

/// CLT variance along the constant-tau line: (a + b h + c h^2)/(d + h)^2.
/// Agrees with asymptotic_variance(d, {z_of_tau(d,tau,h), h}).
double tau_variance(const DistributionModel& d, double tau, double h);

/// d/dh of tau_variance: ((2cd - b) h + (bd - 2a)) / (d + h)^3.
double tau_variance_deriv(const DistributionModel& d, double tau, double h);

/// Sign-based case classification. A quantity u is treated as zero when
/// |u| <= 1e-9 (1 + a), so analytically exact boundaries (Gaussian, Laplace
/// median) classify correctly under roundoff.
EfficiencyCase classify(const VarianceCoefficients& c);

/// Optimal smoothing level with a certified global minimum: the stationary
/// value (2a - bd)/(2cd - b), v(0) and the limit Var(Y) are compared
/// explicitly, so a stationary point that is a maximum is never reported.
OptimalSmoothing optimal_smoothing(const VarianceCoefficients& c);

/// Bundles classification, h^*, v(tau,0), v(tau,h^*) and their ratio.
EfficiencyReport efficiency_report(const DistributionModel& d, double tau);

/// Evaluates the efficiency comparison for the model. The left side uses
/// the per-model closed form (pi/2 sigma^2 for Normal, b^2 for Laplace and
/// asymmetric Laplace), exact by construction.
EfficiencyComparison efficiency_condition(const DistributionModel& d);

}  // namespace smoothq
