#include "smoothq/asymptotics.hpp"

#include <algorithm>
#include <cmath>

#include "smoothq/error.hpp"

namespace smoothq {

namespace {

constexpr double kCaseTol = 1e-9;  // zero tolerance for sign classification

void check_tau(double tau) {
  if (!(tau > 0.0 && tau < 1.0)) {
    throw DomainError("tau must lie in (0,1)");
  }
}

void check_smoothing(double h) {
  if (!(h >= 0.0) || !std::isfinite(h)) {
    throw DomainError("h must be finite and nonnegative");
  }
}

double v_of(const VarianceCoefficients& c, double h) {
  const double num = c.a + c.b * h + c.c * h * h;
  const double den = c.d + h;
  return num / (den * den);
}

}  // namespace

double population_minimizer(const DistributionModel& d,
                            const SmoothingParams& p) {
  if (p.h < kTinySmoothing) {
    if (!(p.z > -1.0 && p.z < 1.0)) {
      throw DomainError("population_minimizer: h = 0 requires z in (-1,1)");
    }
    return quantile(d, 0.5 * (1.0 - p.z));
  }

  const double m = mean(d);
  const double half_h = 0.5 * p.h;
  const double level = 0.5 * (1.0 - p.z + p.h * m);
  const auto g = [&](double q) { return cdf(d, q) + half_h * q - level; };

  // Strictly increasing map with slope >= h/2: expand the bracket around the
  // mean until it straddles the root, then bisect and polish with Newton.
  const double sd = std::sqrt(variance(d));
  double width = 20.0 * sd;
  double lo = m - width;
  double hi = m + width;
  while (g(lo) > 0.0) {
    width *= 2.0;
    lo = m - width;
  }
  width = 20.0 * sd;
  while (g(hi) < 0.0) {
    width *= 2.0;
    hi = m + width;
  }

  for (int it = 0; it < 80 && hi - lo > 1e-9 * (1.0 + std::abs(lo)); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (g(mid) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }

  double q = 0.5 * (lo + hi);
  for (int it = 0; it < 12; ++it) {
    const double step = g(q) / (pdf(d, q) + half_h);
    q -= step;
    if (std::abs(step) <= 1e-16 * (1.0 + std::abs(q))) {
      break;
    }
  }
  return q;
}

double z_of_tau(const DistributionModel& d, double tau, double h) {
  check_tau(tau);
  check_smoothing(h);
  return 1.0 - 2.0 * tau + h * (mean(d) - quantile(d, tau));
}

VarianceCoefficients variance_coefficients(const DistributionModel& d,
                                           double tau) {
  check_tau(tau);
  const double q = quantile(d, tau);
  const double a = 4.0 * tau * (1.0 - tau);
  const double b =
      2.0 * (mean_abs_dev(d, q) - (mean(d) - q) * (1.0 - 2.0 * tau));
  const double c = variance(d);
  const double dd = 2.0 * pdf(d, q);
  return VarianceCoefficients{a, b, c, dd, tau};
}

double asymptotic_variance(const DistributionModel& d,
                           const SmoothingParams& p) {
  const double q = population_minimizer(d, p);
  const double fq = cdf(d, q);
  const double big_b =
      4.0 * fq * (1.0 - fq) +
      2.0 * p.h * (mean_abs_dev(d, q) - (mean(d) - q) * (1.0 - 2.0 * fq)) +
      p.h * p.h * variance(d);
  const double den = 2.0 * pdf(d, q) + p.h;
  return big_b / (den * den);
}

double tau_variance(const DistributionModel& d, double tau, double h) {
  check_smoothing(h);
  return v_of(variance_coefficients(d, tau), h);
}

double tau_variance_deriv(const DistributionModel& d, double tau, double h) {
  check_smoothing(h);
  const auto c = variance_coefficients(d, tau);
  const double den = c.d + h;
  return ((2.0 * c.c * c.d - c.b) * h + (c.b * c.d - 2.0 * c.a)) /
         (den * den * den);
}

EfficiencyCase classify(const VarianceCoefficients& c) {
  const double tol = kCaseTol * (1.0 + c.a);
  const double x = c.b * c.d - 2.0 * c.a;  // sign of dv/dh at h = 0
  const double y = 2.0 * c.c * c.d - c.b;  // slope of the derivative numerator
  const bool x_zero = std::abs(x) <= tol;
  const bool y_zero = std::abs(y) <= tol;

  if (x_zero) {
    // Flat start; v then increases (y > 0), stays constant (y = 0), or
    // decreases (y < 0). The first two keep the minimum at h = 0.
    return (y_zero || y > 0.0) ? EfficiencyCase::boundary_flat
                               : EfficiencyCase::monotone_decreasing;
  }
  if (x > 0.0) {
    // Increasing at 0. A negative slope later turns the curve back down;
    // the stationary point is then a maximum and the certified optimum is
    // settled in optimal_smoothing.
    return (y_zero || y > 0.0) ? EfficiencyCase::increasing_from_zero
                               : EfficiencyCase::finite_optimum;
  }
  // Decreasing at 0.
  if (!y_zero && y > 0.0) {
    return EfficiencyCase::finite_optimum;  // interior minimum
  }
  return EfficiencyCase::monotone_decreasing;
}

OptimalSmoothing optimal_smoothing(const VarianceCoefficients& c) {
  switch (classify(c)) {
    case EfficiencyCase::increasing_from_zero:
    case EfficiencyCase::boundary_flat:
      return {OptimalSmoothing::Kind::zero, 0.0};
    case EfficiencyCase::monotone_decreasing:
      return {OptimalSmoothing::Kind::infinite, 0.0};
    case EfficiencyCase::finite_optimum:
      break;
  }

  const double h_stat =
      (2.0 * c.a - c.b * c.d) / (2.0 * c.c * c.d - c.b);
  const double v0 = v_of(c, 0.0);
  const double v_limit = c.c;  // v -> Var(Y) as h -> inf

  // Certify the global minimum over [0, inf]: the stationary point may be a
  // maximum (derivative positive then negative), in which case the optimum
  // sits at one of the boundaries.
  if (h_stat > 0.0 && std::isfinite(h_stat)) {
    const double v_stat = v_of(c, h_stat);
    if (v_stat <= v0 && v_stat <= v_limit) {
      return {OptimalSmoothing::Kind::finite, h_stat};
    }
  }
  if (v0 <= v_limit) {
    return {OptimalSmoothing::Kind::zero, 0.0};
  }
  return {OptimalSmoothing::Kind::infinite, 0.0};
}

EfficiencyReport efficiency_report(const DistributionModel& d, double tau) {
  const auto coeffs = variance_coefficients(d, tau);
  const auto cls = classify(coeffs);
  const auto h_star = optimal_smoothing(coeffs);
  const double v0 = v_of(coeffs, 0.0);

  double v_opt;
  bool attained;
  switch (h_star.kind) {
    case OptimalSmoothing::Kind::finite:
      v_opt = v_of(coeffs, h_star.value);
      attained = true;
      break;
    case OptimalSmoothing::Kind::zero:
      v_opt = v0;
      attained = true;
      break;
    case OptimalSmoothing::Kind::infinite:
    default:
      // The infimum Var(Y) is a limit only: h -> inf estimates the mean,
      // not the tau-quantile, so the optimum is never attained.
      v_opt = coeffs.c;
      attained = false;
      break;
  }
  return EfficiencyReport{tau,           h_star, v0, v_opt, v_opt / v0,
                          cls,           attained};
}

EfficiencyComparison efficiency_condition(const DistributionModel& d) {
  return std::visit(
      [&](const auto& m) -> EfficiencyComparison {
        using T = std::decay_t<decltype(m)>;
        const double var = variance(d);
        if constexpr (std::is_same_v<T, Normal>) {
          // tau = 1/2, f(m) = 1/(sigma sqrt(2 pi)):
          // left side = pi/2 * sigma^2.
          const double left = 0.5 * 3.14159265358979323846 * m.sigma * m.sigma;
          return {left < var, left, var, 0.5};
        } else if constexpr (std::is_same_v<T, Laplace>) {
          // tau = 1/2, f(m) = 1/(2b): left side = b^2.
          const double left = m.b * m.b;
          return {left < var, left, var, 0.5};
        } else {
          // At the location parameter tau = kappa^2/(1+kappa^2) and
          // tau(1-tau)/f^2 collapses to b^2 exactly.
          const double k2 = m.kappa * m.kappa;
          const double left = m.b * m.b;
          return {left < var, left, var, k2 / (1.0 + k2)};
        }
      },
      d);
}

}  // namespace smoothq
