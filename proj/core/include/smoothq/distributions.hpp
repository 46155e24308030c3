#pragma once

#include <cstdint>
#include <variant>

#include "smoothq/sample.hpp"

namespace smoothq {

/// Normal(mu, sigma^2). sigma is the standard deviation, > 0.
struct Normal {
  double mu;
  double sigma;
  Normal(double mu, double sigma);
};

/// Laplace with location mu and scale b > 0: f(y) = exp(-|y-mu|/b) / (2b).
struct Laplace {
  double mu;
  double b;
  Laplace(double mu, double b);
};

/// Asymmetric Laplace AL(mu, b, kappa), kappa > 0. Density
///
///   f(y) = kappa / (b (1+kappa^2)) * exp(-(kappa/b) (y-mu))    for y >= mu
///        = kappa / (b (1+kappa^2)) * exp(-(mu-y) / (b kappa))  for y <  mu
///
/// so kappa > 1 puts the heavy tail on the left. Mean mu + b(1/kappa - kappa),
/// variance b^2 (1+kappa^4)/kappa^2, and F(mu) = kappa^2/(1+kappa^2).
/// kappa = 1 reduces to Laplace(mu, b).
struct AsymmetricLaplace {
  double mu;
  double b;
  double kappa;
  AsymmetricLaplace(double mu, double b, double kappa);
};

/// Closed analytic model: every population quantity used by the asymptotic
/// calculus has an exact formula, and sampling inverts the cdf.
using DistributionModel = std::variant<Normal, Laplace, AsymmetricLaplace>;

/// Density f(x).
double pdf(const DistributionModel& d, double x);

/// Distribution function F(x), continuous and strictly increasing.
double cdf(const DistributionModel& d, double x);

/// Inverse F^{-1}(p) for p in (0,1); cdf(quantile(p)) = p to ~1e-15.
/// Throws DomainError outside (0,1).
double quantile(const DistributionModel& d, double p);

double mean(const DistributionModel& d);
double variance(const DistributionModel& d);

/// E|Y - q|, in closed form for all three models.
double mean_abs_dev(const DistributionModel& d, double q);

/// n i.i.d. draws by inverse transform from one SplitMix64 stream seeded
/// with `seed`; deterministic, returned sorted with cached mean.
/// Throws DomainError when n = 0.
Sample draw_sample(const DistributionModel& d, std::size_t n,
                   std::uint64_t seed);

}  // namespace smoothq
