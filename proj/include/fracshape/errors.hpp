#pragma once

#include <stdexcept>
#include <string>

namespace fracshape {

// Invalid user input: bad grid spec, out-of-range parameters, malformed files.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// A solver or quadrature failed to reach its tolerance.
struct NumericalError : std::runtime_error {
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace fracshape
