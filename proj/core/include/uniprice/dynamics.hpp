#pragma once

#include <cstddef>
#include <variant>
#include <vector>

#include "uniprice/model.hpp"

namespace uniprice {

struct DiscriminatoryClearing {
  Allocation allocation;
  std::map<BidderId, Rational> payments;  // units won times own bid
};

/// Pay-as-bid clearing. Units are allocated exactly as in clear_sealed_bid.
DiscriminatoryClearing discriminatory_clear(const Market& market, const BidProfile& profile);

Rational discriminatory_payoff(const Market& market, const BidProfile& profile, const BidderId& bidder);

struct DynamicsConfig {
  Rational epsilon;
  std::size_t max_rounds = 100;
  BidProfile initial;  // missing bidders start at 0
};

/// A profile that already appeared with the same bidder next to move.
/// trajectory[start] and trajectory[start + period] are the matched states.
struct Cycle {
  std::size_t period = 0;
  std::size_t start = 0;
};
struct Converged {};
struct BudgetExhausted {};

using DynamicsVerdict = std::variant<Cycle, Converged, BudgetExhausted>;

struct DynamicsResult {
  std::vector<BidProfile> trajectory;  // profile after each move
  std::vector<BidderId> movers;        // who moved at each step
  DynamicsVerdict verdict;
};

/// Round-robin best responses under pay-as-bid pricing on the grid
/// {0, epsilon, ..., <= highest value}. Bidders move in input order, each
/// taking the lowest payoff-maximizing bid. Runs at most max_rounds full
/// rounds. Throws kUnsupportedBidderCount for more than two bidders,
/// kUnsupportedSupply for a step curve, kInvalidGrid for epsilon <= 0 and
/// kOffGrid for an initial bid off the grid.
DynamicsResult best_response_dynamics(const Market& market, const DynamicsConfig& config);

}  // namespace uniprice
