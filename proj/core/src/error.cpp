#include "uniprice/error.hpp"

namespace uniprice {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kEmptyBidders: return "EmptyBidders";
    case ErrorCode::kDuplicateId: return "DuplicateId";
    case ErrorCode::kNonPositiveValue: return "NonPositiveValue";
    case ErrorCode::kNonPositiveQuantity: return "NonPositiveQuantity";
    case ErrorCode::kNegativeReserve: return "NegativeReserve";
    case ErrorCode::kNonMonotoneSupply: return "NonMonotoneSupply";
    case ErrorCode::kCapBelowCost: return "CapBelowCost";
    case ErrorCode::kInsufficientCompetition: return "InsufficientCompetition";
    case ErrorCode::kNoThresholdSolution: return "NoThresholdSolution";
    case ErrorCode::kUnsupportedSupply: return "UnsupportedSupply";
    case ErrorCode::kMissingStrategy: return "MissingStrategy";
    case ErrorCode::kNonMonotoneStrategy: return "NonMonotoneStrategy";
    case ErrorCode::kInvalidEventLog: return "InvalidEventLog";
    case ErrorCode::kInvalidGrid: return "InvalidGrid";
    case ErrorCode::kOffGrid: return "OffGrid";
    case ErrorCode::kNotTwoBidders: return "NotTwoBidders";
    case ErrorCode::kBudgetExceeded: return "BudgetExceeded";
    case ErrorCode::kUnsupportedBidderCount: return "UnsupportedBidderCount";
    case ErrorCode::kParse: return "Parse";
  }
  return "Unknown";
}

bool is_validation_error(ErrorCode code) {
  switch (code) {
    case ErrorCode::kEmptyBidders:
    case ErrorCode::kDuplicateId:
    case ErrorCode::kNonPositiveValue:
    case ErrorCode::kNonPositiveQuantity:
    case ErrorCode::kNegativeReserve:
    case ErrorCode::kNonMonotoneSupply:
    case ErrorCode::kCapBelowCost:
    case ErrorCode::kInvalidGrid:
    case ErrorCode::kOffGrid:
    case ErrorCode::kUnsupportedBidderCount:
    case ErrorCode::kNotTwoBidders:
      return true;
    default:
      return false;
  }
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message),
      code_(code) {}

}  // namespace uniprice
