#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace istat {

/// A prefix computation was asked to look past the configured ceiling.
class ResourceLimit : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed textual input. `position` is a 0-based byte offset into the input.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, std::size_t position)
      : std::runtime_error(message + " at position " + std::to_string(position)),
        position_(position) {}

  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

class FiniteSelector : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnboundedRange : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class PreconditionFailed : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConstructionFailed : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace istat
