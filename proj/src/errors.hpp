#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace crystalflow {

// Failure classes. The numeric values line up with the C API status codes
// and, for the first four, with the CLI exit codes.
enum class ErrorCode {
  Config = 1,
  Inadmissible = 2,
  Singular = 3,
  InvalidArgument = 4,
  Io = 5,
  StepLimit = 6,
  Overflow = 7,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& what)
      : Error(ErrorCode::InvalidArgument, what) {}
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what)
      : Error(ErrorCode::Config, what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorCode::Io, what) {}
};

class OverflowError : public Error {
 public:
  explicit OverflowError(const std::string& what)
      : Error(ErrorCode::Overflow, what) {}
};

// Raised when min(1 + v) on the collocation grid drops to the guard
// threshold. `time()` is NaN unless the failure happened inside a time loop.
class SingularityError : public Error {
 public:
  SingularityError(const std::string& what, double min_one_plus_v,
                   double time = std::numeric_limits<double>::quiet_NaN())
      : Error(ErrorCode::Singular, what),
        min_one_plus_v_(min_one_plus_v),
        time_(time) {}
  double min_one_plus_v() const noexcept { return min_one_plus_v_; }
  double time() const noexcept { return time_; }

 private:
  double min_one_plus_v_;
  double time_;
};

class StepLimitError : public Error {
 public:
  explicit StepLimitError(const std::string& what)
      : Error(ErrorCode::StepLimit, what) {}
};

}  // namespace crystalflow
