#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <string_view>

namespace entromin {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using VectorCRef = Eigen::Ref<const Vector>;
using Index = Eigen::Index;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Lengths or shapes that do not line up.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// Parameters outside their admissible range, or a function evaluated where it
// is undefined (e.g. an entropy at the origin).
class DomainError : public Error {
 public:
  using Error::Error;
};

// An iterative routine exhausted its budget without meeting its tolerance.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

// Input files or manifests that cannot be parsed.
class FormatError : public Error {
 public:
  using Error::Error;
};

inline void check_length(std::string_view what, Index expected, Index actual) {
  if (expected != actual) {
    throw DimensionError(std::string(what) + ": expected length " + std::to_string(expected) +
                         ", got " + std::to_string(actual));
  }
}

const char* version();

}  // namespace entromin

namespace entromin {

/// Shortest round-trip text for a double ("inf", "-inf", "nan" for non-finite).
std::string format_double(double v);

}  // namespace entromin
