#pragma once
#ifndef RCS_ERRORS_HPP
#define RCS_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rcs {

/// Bad arguments: empty or duplicate index sets, K > M, mismatched lengths.
class InvalidArgument : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

class DimensionMismatch : public InvalidArgument {
public:
  using InvalidArgument::InvalidArgument;
};

/// Thrown by the least-squares solver when the column set is numerically
/// rank deficient. Carries the detected rank.
class RankDeficient : public std::runtime_error {
public:
  RankDeficient(std::size_t rank, std::size_t columns)
      : std::runtime_error("rank-deficient system: rank " + std::to_string(rank) + " of " +
                           std::to_string(columns) + " columns"),
        rank_(rank), columns_(columns) {}

  std::size_t rank() const noexcept { return rank_; }
  std::size_t columns() const noexcept { return columns_; }

private:
  std::size_t rank_;
  std::size_t columns_;
};

/// A matching-pursuit run could not produce a model (the joint fit failed).
class ReconstructionFailure : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// The exhaustive search would exceed its candidate budget.
class BudgetExceeded : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// No outlier-free subset exists (M > N - I).
class Infeasible : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

} // namespace rcs

#endif // RCS_ERRORS_HPP
