#ifndef REVIVAL_ERROR_HPP
#define REVIVAL_ERROR_HPP

#include <stdexcept>
#include <string>

namespace revival {

/// Raised when an argument falls outside the domain an operation is defined on.
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// Raised for malformed or inconsistent scenario descriptions.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what, int line = 0)
      : std::runtime_error(what), line_(line) {}

  /// 1-based source line the problem was traced to, or 0 when unknown.
  int line() const noexcept { return line_; }

 private:
  int line_;
};

}  // namespace revival

#endif  // REVIVAL_ERROR_HPP
