#pragma once

#include <cstdint>
#include <utility>
#include <variant>
#include <vector>

#include "smoothq/asymptotics.hpp"
#include "smoothq/distributions.hpp"
#include "smoothq/estimator.hpp"

namespace smoothq {

/// A point on the constant-tau line: targets F^{-1}(tau) for every h >= 0.
struct TauSmoothing {
  double tau;
  double h;
};

/// One Monte Carlo experiment. Replicate r draws its n observations from
/// SplitMix64(derive_stream(seed, r)), so reports are bitwise reproducible
/// and independent of scheduling; replicates run in parallel into
/// pre-assigned slots and are aggregated in slot order.
struct SimulationConfig {
  DistributionModel distribution;
  std::variant<TauSmoothing, SmoothingParams> point;
  std::size_t n = 2000;
  std::size_t replications = 2000;
  std::uint64_t seed = 0;
  /// Probability grid for the standardized-error quantile summary.
  std::vector<double> diag_probs = {0.05, 0.25, 0.5, 0.75, 0.95};
};

struct SimulationReport {
  double target_q;             // population quantile, or q(z,h)
  double est_mean;             // average of the replicate estimates
  double est_bias;             // est_mean - target_q
  double scaled_variance;      // n * sample variance of the estimates
  double predicted_variance;   // v(tau,h), or sigma^2(z,h)
  double relative_error;       // |scaled - predicted| / predicted
  /// Empirical quantiles of sqrt(n)(qhat - q)/sigma at config.diag_probs;
  /// close to the standard normal quantiles when the CLT holds.
  std::vector<double> standardized_error_quantiles;
};

SimulationReport run_simulation(const SimulationConfig& config);

/// RMSE of the estimator against the population minimizer for each sample
/// size. Grid point j uses sub-seed derive_stream(seed, j), with replicate
/// streams derived from that. n_grid must be nonempty and ascending.
std::vector<std::pair<std::size_t, double>> consistency_sweep(
    const DistributionModel& d, const SmoothingParams& p,
    std::span<const std::size_t> n_grid, std::size_t replications,
    std::uint64_t seed);

struct SurfacePoint {
  double h;
  double scaled_variance;
  double predicted_variance;
};

/// One run per grid h, each targeting F^{-1}(tau) via z_of_tau. All grid
/// points share the same replicate streams (common random numbers), which
/// makes the empirical curve directly comparable across h.
std::vector<SurfacePoint> variance_surface(const DistributionModel& d,
                                           double tau,
                                           std::span<const double> h_grid,
                                           std::size_t n, std::size_t reps,
                                           std::uint64_t seed);

/// Paired comparison of the scaled variance at two smoothing levels on the
/// constant-tau line. Both estimators see the same replicate samples; the
/// standard error of the difference comes from the per-replicate squared
/// deviations (delta method on the paired design), so correlated estimates
/// yield a far sharper comparison than two independent runs.
struct PairedVarianceComparison {
  double h_a, h_b;
  double scaled_a, scaled_b;  // n * Var(qhat) at h_a, h_b
  double difference;          // scaled_a - scaled_b
  double standard_error;      // SE of difference
};

PairedVarianceComparison paired_variance_comparison(
    const DistributionModel& d, double tau, double h_a, double h_b,
    std::size_t n, std::size_t reps, std::uint64_t seed);

}  // namespace smoothq
