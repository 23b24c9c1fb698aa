#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace treesize {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Raised for malformed user input (bad vectors, indices, syntax).
class InputError : public Error {
  public:
    using Error::Error;
};

class ZeroVector : public InputError {
  public:
    ZeroVector() : InputError("all amplitudes are below the zero threshold") {}
};

class BadPartition : public InputError {
  public:
    using InputError::InputError;
};

class DimensionMismatch : public InputError {
  public:
    using InputError::InputError;
};

class QubitCoverage : public InputError {
  public:
    using InputError::InputError;
};

class Unsupported : public InputError {
  public:
    using InputError::InputError;
};

class BadParams : public InputError {
  public:
    using InputError::InputError;
};

class InvalidDensity : public InputError {
  public:
    using InputError::InputError;
};

class BadEnsemble : public InputError {
  public:
    using InputError::InputError;
};

class NotIrreducible : public InputError {
  public:
    using InputError::InputError;
};

class WitnessMissing : public InputError {
  public:
    using InputError::InputError;
};

class SyntaxError : public InputError {
  public:
    SyntaxError(const std::string &what, std::size_t pos)
        : InputError(what + " at position " + std::to_string(pos)),
          pos_(pos) {}
    [[nodiscard]] std::size_t position() const noexcept { return pos_; }

  private:
    std::size_t pos_;
};

/// Numerical breakdown: a decision could not be made at the configured
/// tolerance, or a required transformation is too ill-conditioned.
class Degenerate : public Error {
  public:
    using Error::Error;
};

/// A combinatorial or optimization budget was exhausted.
class BudgetExceeded : public Error {
  public:
    using Error::Error;
};

class BudgetTooLarge : public BudgetExceeded {
  public:
    using BudgetExceeded::BudgetExceeded;
};

} // namespace treesize
