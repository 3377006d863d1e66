#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace simorder {

/// Malformed input file. `where()` is a 1-based line number for text inputs
/// and a byte offset for binary inputs.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& source, std::size_t where, const std::string& what)
      : std::runtime_error(source + ":" + std::to_string(where) + ": " + what),
        source_(source), where_(where) {}

  const std::string& source() const noexcept { return source_; }
  std::size_t where() const noexcept { return where_; }

 private:
  std::string source_;
  std::size_t where_;
};

/// File could not be opened, read or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An evaluation produced no meaningful number (too few covered pairs,
/// constant input to a correlation, ...).
class EvalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Correlation of a list with zero variance.
class UndefinedCorrelation : public EvalError {
 public:
  using EvalError::EvalError;
};

class NonConvergence : public std::runtime_error {
 public:
  NonConvergence(double residual, int sweeps)
      : std::runtime_error("eigensolver did not converge after " + std::to_string(sweeps) +
                           " sweeps (off-diagonal residual " + std::to_string(residual) + ")"),
        residual_(residual) {}

  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

}  // namespace simorder
