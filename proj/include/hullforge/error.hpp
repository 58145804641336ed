#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hullforge {

// Base of every error raised by the library. Callers that only need a
// message catch this; the CLI maps the concrete types onto exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what + " at position " + std::to_string(position)), position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

// Negative exponent evaluated on a coordinate axis (the set L).
class PoleError : public Error {
 public:
  using Error::Error;
};

// Non-finite coefficient or evaluation input.
class DomainError : public Error {
 public:
  using Error::Error;
};

// The Jacobian determinant of (p, reflect(p)) vanishes identically.
class DegenerateSymbolError : public Error {
 public:
  using Error::Error;
};

class FactorizationError : public Error {
 public:
  using Error::Error;
};

// A factor whose torus zero set is not a graph w = c z^m or a double cover w^2 = r(z).
class UnsupportedFactorError : public Error {
 public:
  using Error::Error;
};

// Ill-posed double cover: branch point on the unit circle, repeated branch
// point, pole of r in the closed disc, or continuation failure.
class VarietyError : public Error {
 public:
  using Error::Error;
};

class DegreeGuardError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace hullforge
