#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace xpadic {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid arguments: non-prime moduli, non-monic or non-Eisenstein
/// defining polynomials, out-of-range indices, mismatched parents.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// An inexact operation cannot be carried out at the available precision,
/// e.g. division by a weakly zero element.
class PrecisionError : public Error {
 public:
  using Error::Error;
};

/// A loop over epochs reached the configured cap without an answer.
/// Carries the last weak valuation observed, when there was one.
class BudgetExhausted : public Error {
 public:
  BudgetExhausted(const std::string& what, int last_epoch,
                  std::optional<std::int64_t> last_weak_valuation = std::nullopt)
      : Error(what), last_epoch_(last_epoch), last_weak_valuation_(last_weak_valuation) {}

  int last_epoch() const { return last_epoch_; }
  std::optional<std::int64_t> last_weak_valuation() const { return last_weak_valuation_; }

 private:
  int last_epoch_;
  std::optional<std::int64_t> last_weak_valuation_;
};

/// A freshly computed approximation is inconsistent with the cached ones.
/// This always indicates a bug in a get-approx function or the backend.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Malformed input to the expression language.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace xpadic
