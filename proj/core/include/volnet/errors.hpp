#pragma once

#include <stdexcept>
#include <string>

namespace volnet {

// Malformed input data, invalid geometry or configuration.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A well-formed analysis that cannot produce a result (too few usable
// observations, zero variance, ...).
class AnalysisError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace volnet
