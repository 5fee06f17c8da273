#pragma once

#include <stdexcept>
#include <string>

namespace gowlab {

/// Category of a failure; lab-cli maps these onto process exit codes.
enum class ErrorKind {
  kInvalidSpec,
  kDomain,
  kCost,
  kPrecision,
  kContract,
  kPivot,
  kParse,
  kUsage,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Thrown when an operation would exceed its term budget. Carries the
/// number of terms the request needed so callers can report it.
class CostError : public Error {
 public:
  CostError(const std::string& what, double required_terms, double budget)
      : Error(ErrorKind::kCost, what),
        required_terms_(required_terms),
        budget_(budget) {}

  double required_terms() const noexcept { return required_terms_; }
  double budget() const noexcept { return budget_; }

 private:
  double required_terms_;
  double budget_;
};

/// Throws CostError when `terms` exceeds `budget`.
inline void charge(double terms, double budget, const std::string& what) {
  if (terms > budget) {
    throw CostError(what + " needs " + std::to_string(static_cast<long double>(terms)) +
                        " terms, budget is " + std::to_string(static_cast<long double>(budget)),
                    terms, budget);
  }
}

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidSpec: return "invalid-spec";
    case ErrorKind::kDomain: return "domain";
    case ErrorKind::kCost: return "cost";
    case ErrorKind::kPrecision: return "precision";
    case ErrorKind::kContract: return "contract";
    case ErrorKind::kPivot: return "pivot";
    case ErrorKind::kParse: return "parse";
    case ErrorKind::kUsage: return "usage";
  }
  return "unknown";
}

}  // namespace gowlab
