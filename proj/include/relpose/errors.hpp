#ifndef RELPOSE_ERRORS_HPP
#define RELPOSE_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <utility>

namespace relpose {

// Base for every error raised by the library. Callers that only care about
// "something in the estimator refused the input" catch this.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input geometry cannot support the requested quantity (zero-length
// direction, vertical-only motion, collinear vanishing directions, ...).
class DegenerateGeometry : public Error {
 public:
  using Error::Error;
};

// Euler decomposition too close to gimbal lock.
class GimbalLock : public Error {
 public:
  GimbalLock(const std::string& what, char axis) : Error(what), axis_(axis) {}
  char axis() const noexcept { return axis_; }

 private:
  char axis_;
};

class NoCandidates : public Error {
 public:
  using Error::Error;
};

class TargetLost : public Error {
 public:
  using Error::Error;
};

class AmbiguousCorrespondence : public Error {
 public:
  using Error::Error;
};

// Scenario parse / validation failure. `field()` is the dotted key path (or
// empty for syntax errors) and `line()` the 1-based source line (0 if the
// value came from an override or a default).
class ConfigError : public Error {
 public:
  ConfigError(const std::string& what, std::string field, int line = 0)
      : Error(what), field_(std::move(field)), line_(line) {}
  const std::string& field() const noexcept { return field_; }
  int line() const noexcept { return line_; }

 private:
  std::string field_;
  int line_;
};

}  // namespace relpose

#endif  // RELPOSE_ERRORS_HPP
