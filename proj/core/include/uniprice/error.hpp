#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace uniprice {

enum class ErrorCode {
  // validation
  kEmptyBidders,
  kDuplicateId,
  kNonPositiveValue,
  kNonPositiveQuantity,
  kNegativeReserve,
  kNonMonotoneSupply,
  kCapBelowCost,
  // solver
  kInsufficientCompetition,
  kNoThresholdSolution,
  kUnsupportedSupply,
  // clock
  kMissingStrategy,
  kNonMonotoneStrategy,
  kInvalidEventLog,
  // oracle / dynamics
  kInvalidGrid,
  kOffGrid,
  kNotTwoBidders,
  kBudgetExceeded,
  kUnsupportedBidderCount,
  // input
  kParse,
};

std::string_view to_string(ErrorCode code);

/// Validation errors are distinguished from parse errors by the CLI, which
/// maps them onto different exit codes.
bool is_validation_error(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace uniprice
