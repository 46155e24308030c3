#include "smoothq/sample.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "smoothq/error.hpp"

namespace smoothq {

namespace {

// Neumaier compensated sum; keeps the cached mean accurate to a few ulps
// even for large n with cancellation.
double stable_mean(const std::vector<double>& xs) {
  double sum = 0.0;
  double comp = 0.0;
  for (double x : xs) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x)) {
      comp += (sum - t) + x;
    } else {
      comp += (x - t) + sum;
    }
    sum = t;
  }
  return (sum + comp) / static_cast<double>(xs.size());
}

}  // namespace

Sample::Sample(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) {
    throw DomainError("Sample: need at least one observation");
  }
  std::sort(values_.begin(), values_.end());
  mean_ = stable_mean(values_);
}

}  // namespace smoothq
