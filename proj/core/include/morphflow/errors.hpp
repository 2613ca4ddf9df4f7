#ifndef MORPHFLOW_ERRORS_HPP
#define MORPHFLOW_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace morphflow {

/// Raised when inputs violate a documented precondition.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Raised on file system and format failures.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace morphflow

#endif  // MORPHFLOW_ERRORS_HPP
