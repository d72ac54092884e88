#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "uniprice/rational.hpp"

namespace uniprice {

using BidderId = std::string;

/// Flat demand: `value` per unit up to `quantity` units, nothing beyond.
struct Bidder {
  BidderId id;
  Rational value;
  Rational quantity;
};

struct SupplyStep {
  Rational price;
  Rational quantity;
};

/// Either a fixed quantity or a nondecreasing, right-continuous step
/// function of the price. Below the first breakpoint the curve is held at the
/// first breakpoint's quantity.
class SupplyCurve {
 public:
  static SupplyCurve constant(Rational quantity);
  static SupplyCurve steps(std::vector<SupplyStep> breakpoints);

  bool is_constant() const { return breakpoints_.size() == 1 && constant_; }
  std::span<const SupplyStep> breakpoints() const { return breakpoints_; }

  Rational at(const Rational& price) const;

 private:
  SupplyCurve() = default;

  bool constant_ = false;
  std::vector<SupplyStep> breakpoints_;
};

struct AuctionEnv {
  SupplyCurve supply = SupplyCurve::constant(1);
  Rational reserve;
  std::vector<Bidder> bidders;
};

/// A bidder together with its position in the caller's input list.
struct RankedBidder {
  Bidder bidder;
  std::size_t input_index = 0;

  const BidderId& id() const { return bidder.id; }
  const Rational& value() const { return bidder.value; }
  const Rational& quantity() const { return bidder.quantity; }
};

/// An AuctionEnv that passed validation. Bidders are ranked by value,
/// highest first; equal values keep input order.
class Market {
 public:
  const SupplyCurve& supply() const { return supply_; }
  const Rational& reserve() const { return reserve_; }
  std::span<const RankedBidder> bidders() const { return bidders_; }

  std::size_t size() const { return bidders_.size(); }
  const RankedBidder& find(const BidderId& id) const;
  /// Position of `id` in the ranked order.
  std::size_t rank_of(const BidderId& id) const;

  /// Bidders with value >= reserve; the rest can never trade.
  std::vector<RankedBidder> participants() const;

  Rational max_value() const { return bidders_.front().value(); }

 private:
  friend Market validate_env(const AuctionEnv& env);

  SupplyCurve supply_ = SupplyCurve::constant(1);
  Rational reserve_;
  std::vector<RankedBidder> bidders_;
};

/// Checks every AuctionEnv invariant and ranks the bidders.
Market validate_env(const AuctionEnv& env);

Rational effective_demand(const Rational& quantity, const Rational& supply);
inline Rational effective_demand(const Bidder& bidder, const Rational& supply) {
  return effective_demand(bidder.quantity, supply);
}

inline Rational evaluate_supply(const SupplyCurve& curve, const Rational& price) {
  return curve.at(price);
}

using Allocation = std::map<BidderId, Rational>;
using BidProfile = std::map<BidderId, Rational>;

Rational total_units(const Allocation& allocation);

enum class StepAction { kStopResidual, kStopExact, kDrop, kStopLast, kRaiseFloor };

std::string_view to_string(StepAction action);

struct BidderThreshold {
  BidderId id;
  Rational bar;  // indifference price
  Rational hat;  // min(value, bar) for buyers, max(cost, bar) for sellers
  bool residual_type = false;  // rivals alone cannot cover supply
};

/// One round of the equilibrium procedure.
struct StepRecord {
  std::size_t step = 0;
  std::vector<BidderId> remaining;
  Rational floor_price;  // ceiling price for procurement
  Rational supply;
  std::vector<BidderThreshold> thresholds;  // empty for exact and last stops
  StepAction action = StepAction::kDrop;
  std::optional<BidderId> subject;  // dropped or residual bidder; none for a floor raise
};

struct Outcome {
  Rational price;
  Allocation allocation;  // every bidder of the market, zero awards included
  BidProfile canonical_bids;
  std::vector<BidderId> dropout_order;
  std::vector<StepRecord> trace;
  std::optional<BidderId> residual;

  Rational units_sold() const { return total_units(allocation); }
  Rational revenue() const { return price * units_sold(); }
};

}  // namespace uniprice
