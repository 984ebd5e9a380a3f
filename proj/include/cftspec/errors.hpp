#pragma once

#include <stdexcept>
#include <string>

namespace cftspec {

enum class ErrorKind {
  InvalidArgument,
  InvalidModel,
  FusionIntegrality,
  InsufficientCutoff,
  NonElliptic,
  UndefinedDimension,
  Inconsistency,
  WindowTooSmall,
  InvalidCover,
  EmbeddingViolation,
  RefinePath,
  KindMismatch,
  IdentityViolation,
  NotSeparating,
  Cocycle,
  HypothesisViolation,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

/// Thrown when a truncated q-series cannot reach the requested accuracy.
/// required_cutoff() is the smallest cutoff whose tail bound would suffice.
class InsufficientCutoff : public Error {
public:
  InsufficientCutoff(const std::string& what, long required)
      : Error(ErrorKind::InsufficientCutoff, what), required_(required) {}

  long required_cutoff() const noexcept { return required_; }

private:
  long required_;
};

class EmbeddingViolation : public Error {
public:
  EmbeddingViolation(const std::string& what, int i, int j)
      : Error(ErrorKind::EmbeddingViolation, what), i_(i), j_(j) {}

  int i() const noexcept { return i_; }
  int j() const noexcept { return j_; }

private:
  int i_;
  int j_;
};

}  // namespace cftspec
