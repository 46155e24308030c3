#pragma once

#include <stdexcept>

namespace smoothq {

/// Thrown when an argument lies outside the domain of an operation
/// (invalid parameter range, probability outside (0,1), empty sample, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace smoothq
