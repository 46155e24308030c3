#include "smoothq/estimator.hpp"

#include <algorithm>
#include <cmath>

#include "smoothq/error.hpp"

namespace smoothq {

namespace {

void check_params(double z, double h) {
  if (!std::isfinite(z) || !std::isfinite(h)) {
    throw DomainError("SmoothingParams: z and h must be finite");
  }
  if (h < 0.0) {
    throw DomainError("SmoothingParams: h must be nonnegative");
  }
  if (h == 0.0 && !(z > -1.0 && z < 1.0)) {
    throw DomainError("SmoothingParams: h = 0 requires z in (-1,1)");
  }
}

// Order statistic Y_(ceil(n t)) as the generalized inverse of Fhat,
// inf{ q : Fhat(q) >= t }, t in (0,1).
double empirical_quantile(const std::vector<double>& ys, double t) {
  const auto n = ys.size();
  // Smallest index with (index+1)/n >= t; ranks are exact small integers,
  // so the comparison below reproduces ceil(n t) without forming it.
  std::size_t lo = 0;
  std::size_t hi = n - 1;
  const double dn = static_cast<double>(n);
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (static_cast<double>(mid + 1) / dn >= t) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return ys[lo];
}

}  // namespace

SmoothingParams::SmoothingParams(double z_, double h_) : z(z_), h(h_) {
  check_params(z, h);
}

double objective(const Sample& s, double q, const SmoothingParams& p) {
  double acc = 0.0;
  for (double y : s.values()) {
    const double r = y - q;
    acc += std::abs(r) - p.z * r + 0.5 * p.h * r * r;
  }
  return acc / static_cast<double>(s.size());
}

double score(const Sample& s, double q, const SmoothingParams& p) {
  const auto& ys = s.values();
  const auto leq = static_cast<double>(
      std::upper_bound(ys.begin(), ys.end(), q) - ys.begin());
  const double fhat = leq / static_cast<double>(ys.size());
  return 2.0 * fhat - 1.0 + p.z + p.h * (q - s.mean());
}

double estimate(const Sample& s, const SmoothingParams& p) {
  const auto& ys = s.values();
  const auto n = ys.size();
  const double dn = static_cast<double>(n);

  if (p.h < kTinySmoothing) {
    if (!(p.z > -1.0 && p.z < 1.0)) {
      throw DomainError("estimate: h = 0 requires z in (-1,1)");
    }
    return empirical_quantile(ys, 0.5 * (1.0 - p.z));
  }

  // Work on deviations from the sample mean: with g = q - mean the
  // condition Fhat(q) + (h/2)q >= (1-z+h*mean)/2 becomes
  // Fhat_dev(g) + (h/2)g >= (1-z)/2, with the mean cancelled exactly.
  const double mean = s.mean();
  const double level = 0.5 * (1.0 - p.z);
  const double half_h = 0.5 * p.h;

  const auto g_at = [&](std::size_t i) {
    // G at the data point: full tie-aware rank over n, plus the linear part.
    const auto rank = static_cast<double>(
        std::upper_bound(ys.begin() + static_cast<std::ptrdiff_t>(i), ys.end(),
                         ys[i]) -
        ys.begin());
    return rank / dn + half_h * (ys[i] - mean);
  };

  // First index whose G value reaches the level; G is nondecreasing in i.
  std::size_t lo = 0;
  std::size_t hi = n;  // n means "past the last data point"
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (g_at(mid) >= level) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }

  if (lo == n) {
    // Level above G(Y_(n)): linear extension with Fhat frozen at 1.
    return mean + (level - 1.0) / half_h;
  }

  const double y = ys[lo];
  const auto below = static_cast<double>(
      std::lower_bound(ys.begin(), ys.end(), y) - ys.begin());
  const double left_limit = below / dn + half_h * (y - mean);
  if (left_limit >= level) {
    // The flat of Fhat before this point already reaches the level: solve
    // the linear piece. Covers the below-data extension via below == 0.
    return mean + (level - below / dn) / half_h;
  }
  // Level crossed inside the jump at a data point.
  return y;
}

std::vector<double> estimate_path(const Sample& s, double z,
                                  std::span<const double> h_grid) {
  if (h_grid.empty()) {
    throw DomainError("estimate_path: empty smoothing grid");
  }
  std::vector<double> out;
  out.reserve(h_grid.size());
  for (double h : h_grid) {
    out.push_back(estimate(s, SmoothingParams(z, h)));
  }
  return out;
}

}  // namespace smoothq
