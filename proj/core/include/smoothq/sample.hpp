#pragma once

#include <cstddef>
#include <vector>

namespace smoothq {

/// Immutable sorted sample with a cached mean. Construction sorts once and
/// computes the mean with compensated summation; every later operation is
/// read-only, so one Sample can be shared across threads freely.
class Sample {
 public:
  /// Takes ownership of the observations. Throws DomainError when empty.
  explicit Sample(std::vector<double> values);

  const std::vector<double>& values() const noexcept { return values_; }
  double mean() const noexcept { return mean_; }
  std::size_t size() const noexcept { return values_.size(); }

  double min() const noexcept { return values_.front(); }
  double max() const noexcept { return values_.back(); }

 private:
  std::vector<double> values_;  // nondecreasing
  double mean_;
};

}  // namespace smoothq
