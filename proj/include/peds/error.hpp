#pragma once

#include <stdexcept>
#include <string>

namespace peds {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error { public: using Error::Error; };
class DomainError : public Error { public: using Error::Error; };
class SingularGramError : public Error { public: using Error::Error; };
class NormalizationError : public Error { public: using Error::Error; };
class SizeError : public Error { public: using Error::Error; };
class PreconditionError : public Error { public: using Error::Error; };
class ScopeError : public Error { public: using Error::Error; };
class NumericError : public Error { public: using Error::Error; };
class ConfigError : public Error { public: using Error::Error; };

// Thrown by the integrators; step is the first step whose result was non-finite or out of range.
class DivergenceError : public Error {
 public:
  DivergenceError(long step, double time)
      : Error("trajectory diverged at step " + std::to_string(step) + " (t=" + std::to_string(time) + ")"),
        step_(step), time_(time) {}
  long step() const { return step_; }
  double time() const { return time_; }

 private:
  long step_;
  double time_;
};

}  // namespace peds
