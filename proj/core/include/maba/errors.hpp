#pragma once

#include <stdexcept>
#include <string>

namespace maba {

// Base of every error raised by the library. The CLI maps these to a failing
// check named after what().
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double best_residual)
      : Error(what), best_residual_(best_residual) {}
  double best_residual() const noexcept { return best_residual_; }

 private:
  double best_residual_;
};

// Coincident interpolation nodes.
class NodeError : public Error {
 public:
  using Error::Error;
};

class ParameterError : public Error {
 public:
  using Error::Error;
};

class SingularityError : public Error {
 public:
  using Error::Error;
};

// gamma = kt*k - kp*km vanishes, or kp*km = 0 where the modified ansatz needs it.
class TwistDegeneracyError : public Error {
 public:
  using Error::Error;
};

// Two spectral parameters closer than the distinctness tolerance.
class CoincidenceError : public Error {
 public:
  using Error::Error;
};

class ArityError : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace maba
