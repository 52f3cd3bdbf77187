#pragma once

#include <stdexcept>
#include <string>

namespace entsa {

// Invalid parameters, unknown names, malformed configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Quadrature failure, too many non-finite model outputs, degenerate estimates.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Histogram grid too sparse for a meaningful conditional entropy.
class SparseGridError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace entsa
