#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace mapconst {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed scalar expression; `position` is the byte offset of the problem.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what + " at position " + std::to_string(position)), position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// A value left the admissible domain (initial condition or iterate).
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what, std::optional<std::uint64_t> index = std::nullopt)
      : Error(index ? what + " (at k=" + std::to_string(*index) + ")" : what), index_(index) {}
  std::optional<std::uint64_t> index() const noexcept { return index_; }

 private:
  std::optional<std::uint64_t> index_;
};

/// The denominator of a step function vanished.
class PoleError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// A configured resource cap (iteration count, exact digit count) was hit.
class CapExceeded : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// No asymptotic template is available for the request.
class TemplateError : public Error {
 public:
  using Error::Error;
};

/// Coefficient matching failed: the ansatz does not fit the map.
class DerivationError : public Error {
 public:
  using Error::Error;
};

}  // namespace mapconst
