#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace kore {

/// Base class for every error the toolkit raises on purpose.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Matrix/vector dimensions do not chain.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// A documented precondition was violated by the caller.
class ContractError : public Error {
 public:
  using Error::Error;
};

/// On-disk payload is corrupt, truncated, or carries the wrong magic.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// Two accumulators that must describe the same layer do not.
class IdentityError : public Error {
 public:
  using Error::Error;
};

/// A template placeholder could not be resolved.
class TemplateError : public Error {
 public:
  using Error::Error;
};

/// Numerical failure (non-convergence, singular system, non-finite loss).
/// `detail` carries the iteration count or step index when one applies.
class NumericError : public Error {
 public:
  explicit NumericError(const std::string& what, std::uint64_t detail = 0)
      : Error(what), detail_(detail) {}

  std::uint64_t detail() const { return detail_; }

 private:
  std::uint64_t detail_;
};

/// Text-generation backend failure (missing canned response, HTTP error).
class ClientError : public Error {
 public:
  using Error::Error;
};

}  // namespace kore
