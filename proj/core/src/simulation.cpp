#include "smoothq/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "smoothq/error.hpp"
#include "smoothq/rng.hpp"

namespace smoothq {

namespace {

// Runs one replicate per slot, in parallel over fixed index ranges. Slot r
// is always fed from derive_stream(seed, r), so the fill is identical for
// any thread count and the later slot-order aggregation is deterministic.
template <class PerReplicate>
void for_each_replicate(std::size_t reps, const PerReplicate& body) {
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) {
    hw = 1;
  }
  const std::size_t workers = std::min<std::size_t>(hw, reps);
  if (workers <= 1) {
    for (std::size_t r = 0; r < reps; ++r) {
      body(r);
    }
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const std::size_t chunk = (reps + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t lo = w * chunk;
    const std::size_t hi = std::min(reps, lo + chunk);
    if (lo >= hi) {
      break;
    }
    pool.emplace_back([&body, lo, hi] {
      for (std::size_t r = lo; r < hi; ++r) {
        body(r);
      }
    });
  }
  for (auto& t : pool) {
    t.join();
  }
}

// Estimates for `reps` independent samples of size n at fixed (z,h).
std::vector<double> replicate_estimates(const DistributionModel& d,
                                        const SmoothingParams& p,
                                        std::size_t n, std::size_t reps,
                                        std::uint64_t seed) {
  std::vector<double> est(reps);
  for_each_replicate(reps, [&](std::size_t r) {
    const Sample s = draw_sample(d, n, derive_stream(seed, r));
    est[r] = estimate(s, p);
  });
  return est;
}

struct Moments {
  double mean;
  double variance;  // unbiased, divisor reps-1
};

// Single-pass Welford accumulation in slot order.
Moments moments_of(const std::vector<double>& xs) {
  double mean = 0.0;
  double m2 = 0.0;
  std::size_t k = 0;
  for (double x : xs) {
    ++k;
    const double delta = x - mean;
    mean += delta / static_cast<double>(k);
    m2 += delta * (x - mean);
  }
  return {mean, m2 / static_cast<double>(xs.size() - 1)};
}

void check_config(const SimulationConfig& c) {
  if (c.n < 2) {
    throw DomainError("simulation: n must be at least 2");
  }
  if (c.replications < 2) {
    throw DomainError("simulation: need at least 2 replications");
  }
  for (double p : c.diag_probs) {
    if (!(p > 0.0 && p < 1.0)) {
      throw DomainError("simulation: diagnostic probabilities must be in (0,1)");
    }
  }
}

}  // namespace

SimulationReport run_simulation(const SimulationConfig& config) {
  check_config(config);

  double target_q;
  double predicted;
  SmoothingParams params(0.0, 0.0);
  if (const auto* tp = std::get_if<TauSmoothing>(&config.point)) {
    params = SmoothingParams(
        z_of_tau(config.distribution, tp->tau, tp->h), tp->h);
    target_q = quantile(config.distribution, tp->tau);
    predicted = tau_variance(config.distribution, tp->tau, tp->h);
  } else {
    params = std::get<SmoothingParams>(config.point);
    target_q = population_minimizer(config.distribution, params);
    predicted = asymptotic_variance(config.distribution, params);
  }

  const std::vector<double> est = replicate_estimates(
      config.distribution, params, config.n, config.replications, config.seed);

  const auto mom = moments_of(est);
  const double scaled = static_cast<double>(config.n) * mom.variance;

  // Standardized errors sqrt(n)(qhat - q)/sigma for the shape diagnostics.
  const double sigma = std::sqrt(predicted);
  const double root_n = std::sqrt(static_cast<double>(config.n));
  std::vector<double> errs(est.size());
  for (std::size_t r = 0; r < est.size(); ++r) {
    errs[r] = root_n * (est[r] - target_q) / sigma;
  }
  std::sort(errs.begin(), errs.end());
  std::vector<double> diag;
  diag.reserve(config.diag_probs.size());
  const auto reps = static_cast<double>(errs.size());
  for (double p : config.diag_probs) {
    const auto idx = static_cast<std::size_t>(
        std::ceil(reps * p)) - 1;  // inf-based empirical quantile
    diag.push_back(errs[std::min(idx, errs.size() - 1)]);
  }

  return SimulationReport{target_q,
                          mom.mean,
                          mom.mean - target_q,
                          scaled,
                          predicted,
                          std::abs(scaled - predicted) / predicted,
                          std::move(diag)};
}

std::vector<std::pair<std::size_t, double>> consistency_sweep(
    const DistributionModel& d, const SmoothingParams& p,
    std::span<const std::size_t> n_grid, std::size_t replications,
    std::uint64_t seed) {
  if (n_grid.empty()) {
    throw DomainError("consistency_sweep: empty n grid");
  }
  if (!std::is_sorted(n_grid.begin(), n_grid.end())) {
    throw DomainError("consistency_sweep: n grid must be ascending");
  }
  if (replications == 0) {
    throw DomainError("consistency_sweep: need at least 1 replication");
  }
  const double target = population_minimizer(d, p);

  std::vector<std::pair<std::size_t, double>> out;
  out.reserve(n_grid.size());
  for (std::size_t j = 0; j < n_grid.size(); ++j) {
    const std::uint64_t point_seed = derive_stream(seed, j);
    const std::vector<double> est =
        replicate_estimates(d, p, n_grid[j], replications, point_seed);
    double sq = 0.0;
    for (double e : est) {
      sq += (e - target) * (e - target);
    }
    out.emplace_back(n_grid[j],
                     std::sqrt(sq / static_cast<double>(est.size())));
  }
  return out;
}

std::vector<SurfacePoint> variance_surface(const DistributionModel& d,
                                           double tau,
                                           std::span<const double> h_grid,
                                           std::size_t n, std::size_t reps,
                                           std::uint64_t seed) {
  if (h_grid.empty()) {
    throw DomainError("variance_surface: empty h grid");
  }
  std::vector<SurfacePoint> out;
  out.reserve(h_grid.size());
  for (double h : h_grid) {
    SimulationConfig cfg{d, TauSmoothing{tau, h}, n, reps, seed};
    const auto report = run_simulation(cfg);
    out.push_back({h, report.scaled_variance, report.predicted_variance});
  }
  return out;
}

PairedVarianceComparison paired_variance_comparison(
    const DistributionModel& d, double tau, double h_a, double h_b,
    std::size_t n, std::size_t reps, std::uint64_t seed) {
  if (n < 2 || reps < 2) {
    throw DomainError("paired_variance_comparison: n and reps must be >= 2");
  }
  const SmoothingParams pa(z_of_tau(d, tau, h_a), h_a);
  const SmoothingParams pb(z_of_tau(d, tau, h_b), h_b);

  std::vector<double> ea(reps);
  std::vector<double> eb(reps);
  for_each_replicate(reps, [&](std::size_t r) {
    const Sample s = draw_sample(d, n, derive_stream(seed, r));
    ea[r] = estimate(s, pa);
    eb[r] = estimate(s, pb);
  });

  const auto ma = moments_of(ea);
  const auto mb = moments_of(eb);
  const double dn = static_cast<double>(n);
  const double dr = static_cast<double>(reps);

  // Per-replicate difference of squared deviations; its mean recovers the
  // variance difference and its spread gives the paired standard error.
  double wbar = 0.0;
  for (std::size_t r = 0; r < reps; ++r) {
    const double da = ea[r] - ma.mean;
    const double db = eb[r] - mb.mean;
    wbar += dn * (da * da - db * db);
  }
  wbar /= dr;
  double wvar = 0.0;
  for (std::size_t r = 0; r < reps; ++r) {
    const double da = ea[r] - ma.mean;
    const double db = eb[r] - mb.mean;
    const double w = dn * (da * da - db * db) - wbar;
    wvar += w * w;
  }
  wvar /= (dr - 1.0);

  const double scaled_a = dn * ma.variance;
  const double scaled_b = dn * mb.variance;
  return PairedVarianceComparison{h_a,
                                  h_b,
                                  scaled_a,
                                  scaled_b,
                                  scaled_a - scaled_b,
                                  std::sqrt(wvar / dr)};
}

}  // namespace smoothq
