#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace avoidpoly {

// Numeric values are mirrored by avp_status in the C API.
enum class ErrorCode {
  invalid_argument = 1,
  dimension_mismatch = 2,
  capacity = 3,
  numerical = 4,
  approximation = 5,
  search_exhausted = 6,
  io = 7,
  parse = 8,
  internal = 99,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Raised when degree escalation cannot reach the requested sup-error budget.
class ApproximationFailure : public Error {
 public:
  ApproximationFailure(const std::string& what, double best_error,
                       unsigned best_degree)
      : Error(ErrorCode::approximation, what),
        best_error_(best_error),
        best_degree_(best_degree) {}

  double best_error() const noexcept { return best_error_; }
  unsigned best_degree() const noexcept { return best_degree_; }

 private:
  double best_error_;
  unsigned best_degree_;
};

// Raised when a shift search cannot find an admissible translation.
// `index` is the forbidden-point index j for the deterministic search and 0
// for the randomized search, where `best_score` carries the best candidate.
class ShiftSearchFailure : public Error {
 public:
  ShiftSearchFailure(const std::string& what, std::size_t index,
                     std::vector<double> candidate, double best_score)
      : Error(ErrorCode::search_exhausted, what),
        index_(index),
        candidate_(std::move(candidate)),
        best_score_(best_score) {}

  std::size_t index() const noexcept { return index_; }
  const std::vector<double>& candidate() const noexcept { return candidate_; }
  double best_score() const noexcept { return best_score_; }

 private:
  std::size_t index_;
  std::vector<double> candidate_;
  double best_score_;
};

}  // namespace avoidpoly
