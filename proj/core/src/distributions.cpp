#include "smoothq/distributions.hpp"

#include <cmath>
#include <string>

#include "smoothq/error.hpp"
#include "smoothq/rng.hpp"

namespace smoothq {

namespace {

constexpr double kSqrt2 = 1.4142135623730950488;
constexpr double kInvSqrt2Pi = 0.3989422804014326779;

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw DomainError(std::string(what) + " must be strictly positive");
  }
}

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) {
    throw DomainError(std::string(what) + " must be finite");
  }
}

double std_normal_pdf(double u) {
  return kInvSqrt2Pi * std::exp(-0.5 * u * u);
}

double std_normal_cdf(double u) { return 0.5 * std::erfc(-u / kSqrt2); }

// Acklam's rational approximation to the standard normal inverse cdf
// (relative error < 1.15e-9 everywhere), refined by one Newton step on
// Phi(x) - p, which leaves the residual at the accuracy of erfc itself.
double std_normal_quantile(double p) {
  static constexpr double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                  -2.759285104469687e+02, 1.383577518672690e+02,
                                  -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                  -1.556989798598866e+02, 6.680131188771972e+01,
                                  -1.328068155288572e+01};
  static constexpr double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                  -2.400758277161838e+00, -2.549732539343734e+00,
                                  4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double e[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                                  2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;

  double x;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((e[0] * q + e[1]) * q + e[2]) * q + e[3]) * q + 1.0);
  } else if (p <= 1.0 - p_low) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) *
        q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((e[0] * q + e[1]) * q + e[2]) * q + e[3]) * q + 1.0);
  }

  x -= (std_normal_cdf(x) - p) / std_normal_pdf(x);
  return x;
}

// F(mu) of the asymmetric Laplace: the mass left of the location parameter.
double al_tau0(const AsymmetricLaplace& d) {
  const double k2 = d.kappa * d.kappa;
  return k2 / (1.0 + k2);
}

}  // namespace

Normal::Normal(double mu_, double sigma_) : mu(mu_), sigma(sigma_) {
  require_finite(mu, "Normal mu");
  require_positive(sigma, "Normal sigma");
}

Laplace::Laplace(double mu_, double b_) : mu(mu_), b(b_) {
  require_finite(mu, "Laplace mu");
  require_positive(b, "Laplace b");
}

AsymmetricLaplace::AsymmetricLaplace(double mu_, double b_, double kappa_)
    : mu(mu_), b(b_), kappa(kappa_) {
  require_finite(mu, "AsymmetricLaplace mu");
  require_positive(b, "AsymmetricLaplace b");
  require_positive(kappa, "AsymmetricLaplace kappa");
}

double pdf(const DistributionModel& d, double x) {
  return std::visit(
      [x](const auto& m) -> double {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, Normal>) {
          return std_normal_pdf((x - m.mu) / m.sigma) / m.sigma;
        } else if constexpr (std::is_same_v<T, Laplace>) {
          return std::exp(-std::abs(x - m.mu) / m.b) / (2.0 * m.b);
        } else {
          const double c = m.kappa / (m.b * (1.0 + m.kappa * m.kappa));
          if (x >= m.mu) {
            return c * std::exp(-(m.kappa / m.b) * (x - m.mu));
          }
          return c * std::exp(-(m.mu - x) / (m.b * m.kappa));
        }
      },
      d);
}

double cdf(const DistributionModel& d, double x) {
  return std::visit(
      [x](const auto& m) -> double {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, Normal>) {
          return std_normal_cdf((x - m.mu) / m.sigma);
        } else if constexpr (std::is_same_v<T, Laplace>) {
          if (x < m.mu) {
            return 0.5 * std::exp((x - m.mu) / m.b);
          }
          return 1.0 - 0.5 * std::exp((m.mu - x) / m.b);
        } else {
          const double t0 = al_tau0(m);
          if (x < m.mu) {
            return t0 * std::exp((x - m.mu) / (m.b * m.kappa));
          }
          return 1.0 - (1.0 - t0) * std::exp(-(m.kappa / m.b) * (x - m.mu));
        }
      },
      d);
}

double quantile(const DistributionModel& d, double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw DomainError("quantile: p must lie in (0,1)");
  }
  return std::visit(
      [p](const auto& m) -> double {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, Normal>) {
          return m.mu + m.sigma * std_normal_quantile(p);
        } else if constexpr (std::is_same_v<T, Laplace>) {
          if (p < 0.5) {
            return m.mu + m.b * std::log(2.0 * p);
          }
          return m.mu - m.b * std::log(2.0 * (1.0 - p));
        } else {
          const double t0 = al_tau0(m);
          if (p <= t0) {
            return m.mu + m.b * m.kappa * std::log(p / t0);
          }
          return m.mu - (m.b / m.kappa) * std::log((1.0 - p) / (1.0 - t0));
        }
      },
      d);
}

double mean(const DistributionModel& d) {
  return std::visit(
      [](const auto& m) -> double {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, Normal>) {
          return m.mu;
        } else if constexpr (std::is_same_v<T, Laplace>) {
          return m.mu;
        } else {
          return m.mu + m.b * (1.0 / m.kappa - m.kappa);
        }
      },
      d);
}

double variance(const DistributionModel& d) {
  return std::visit(
      [](const auto& m) -> double {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, Normal>) {
          return m.sigma * m.sigma;
        } else if constexpr (std::is_same_v<T, Laplace>) {
          return 2.0 * m.b * m.b;
        } else {
          const double k2 = m.kappa * m.kappa;
          return m.b * m.b * (1.0 + k2 * k2) / k2;
        }
      },
      d);
}

double mean_abs_dev(const DistributionModel& d, double q) {
  return std::visit(
      [q](const auto& m) -> double {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, Normal>) {
          const double u = (q - m.mu) / m.sigma;
          return m.sigma *
                 (u * (2.0 * std_normal_cdf(u) - 1.0) + 2.0 * std_normal_pdf(u));
        } else if constexpr (std::is_same_v<T, Laplace>) {
          const double t = std::abs(q - m.mu);
          return t + m.b * std::exp(-t / m.b);
        } else {
          // E|Y-q| = (mean - q) + 2 * int_{-inf}^q F, with the integral in
          // closed form over the piecewise-exponential cdf.
          const double t0 = al_tau0(m);
          const double mn = m.mu + m.b * (1.0 / m.kappa - m.kappa);
          double int_cdf;
          if (q < m.mu) {
            int_cdf =
                m.b * m.kappa * t0 * std::exp((q - m.mu) / (m.b * m.kappa));
          } else {
            int_cdf = m.b * m.kappa * t0 + (q - m.mu) -
                      (m.b / m.kappa) * (1.0 - t0) *
                          (1.0 - std::exp(-(m.kappa / m.b) * (q - m.mu)));
          }
          return (mn - q) + 2.0 * int_cdf;
        }
      },
      d);
}

Sample draw_sample(const DistributionModel& d, std::size_t n,
                   std::uint64_t seed) {
  if (n == 0) {
    throw DomainError("draw_sample: n must be at least 1");
  }
  SplitMix64 gen(seed);
  std::vector<double> values(n);
  for (double& v : values) {
    v = quantile(d, gen.uniform());
  }
  return Sample(std::move(values));
}

}  // namespace smoothq
