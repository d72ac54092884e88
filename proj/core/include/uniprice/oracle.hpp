#pragma once

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "uniprice/model.hpp"

namespace uniprice {

/// Discrete bid set {0, epsilon, 2 epsilon, ..., max_bid}.
struct GridConfig {
  Rational epsilon;
  Rational max_bid;

  void validate() const;
  std::vector<Rational> points() const;
  bool contains(const Rational& bid) const;
  /// Smallest grid point >= bid (may exceed max_bid).
  Rational ceil(const Rational& bid) const;
};

struct Clearing {
  std::optional<Rational> price;  // nullopt when nothing is sold
  Allocation allocation;
};

/// Uniform-price sealed-bid clearing with lowest-winning-bid pricing.
///
/// Bids below the reserve are rejected. Bidders are served in order of bid,
/// then value, then input position, each receiving min(q, m) until supply
/// runs out. The price is the highest bid level at which accepted demand
/// covers m(level); if demand never covers supply, everyone accepted is
/// filled and the price is the reserve. Missing bids count as 0.
Clearing clear_sealed_bid(const Market& market, const BidProfile& profile);

Rational payoff(const Market& market, const BidProfile& profile, const BidderId& bidder);

struct BestResponse {
  Rational bid;
  Rational payoff;
};

/// Exhaustive search over the grid; ties go to the lowest bid.
BestResponse best_response_on_grid(const Market& market, const BidProfile& profile,
                                   const BidderId& bidder, const GridConfig& grid);

struct Verified {};
struct Deviation {
  BidderId bidder;
  Rational bid;
  Rational gain;
};
using NashVerdict = std::variant<Verified, Deviation>;

/// Verified iff no bidder gains strictly from any unilateral grid deviation.
/// Throws kOffGrid if a profile bid is not a grid point.
NashVerdict verify_epsilon_nash(const Market& market, const BidProfile& profile, const GridConfig& grid);

struct EquilibriumClass {
  std::optional<Rational> price;
  Allocation allocation;
  std::vector<BidProfile> profiles;
};

/// Every pure grid profile that passes verify_epsilon_nash, grouped by
/// (price, allocation). Throws kBudgetExceeded when the number of profiles
/// (points^n) exceeds `budget`.
std::vector<EquilibriumClass> enumerate_equilibria_on_grid(const Market& market, const GridConfig& grid,
                                                           std::uint64_t budget = 5'000'000);

/// Closed-form equilibrium of the two-bidder game, zero reserve. The bidder
/// with the higher threshold wins its effective demand; the other either
/// bids its value and gets nothing, or bids zero and takes the residual.
/// Throws kNotTwoBidders unless there are exactly two bidders whose
/// quantities exceed the supply, and kUnsupportedSupply for a reserve or a
/// step curve.
Outcome two_bidder_equilibrium(const Market& market);

/// The solver's canonical bids with winners' "or higher" bids rounded up to
/// the grid. Other bids must already be grid points.
BidProfile grid_profile(const Outcome& outcome, const GridConfig& grid);

}  // namespace uniprice
