#pragma once

#include <stdexcept>
#include <string>

namespace rangebandit {

// Malformed arguments: bad sizes, negative probabilities, inadmissible
// environment parameters.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A loss sequence broke a promise made through side information, an anchor,
// or a smoothness budget.
class ContractViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Grounded Laplacian minor of a disconnected graph.
class RankDeficient : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace rangebandit
