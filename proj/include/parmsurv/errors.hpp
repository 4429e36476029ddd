#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace parmsurv {

// Bad user input: unreadable files, malformed tables, inconsistent options.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A numeric routine was called outside its domain, or produced a value that
// cannot be used (nonpositive likelihood, underflowed survival, ...).
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public InputError {
 public:
  ParseError(const std::string& msg, std::size_t position)
      : InputError(msg + " at position " + std::to_string(position)),
        position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

// Covariance could not be formed (singular or indefinite information).
class InferenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace parmsurv
