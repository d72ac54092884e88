#include "uniprice/model.hpp"

#include <algorithm>
#include <set>

#include "uniprice/error.hpp"

namespace uniprice {

SupplyCurve SupplyCurve::constant(Rational quantity) {
  SupplyCurve curve;
  curve.constant_ = true;
  curve.breakpoints_.push_back({Rational(0), std::move(quantity)});
  return curve;
}

SupplyCurve SupplyCurve::steps(std::vector<SupplyStep> breakpoints) {
  SupplyCurve curve;
  curve.breakpoints_ = std::move(breakpoints);
  return curve;
}

Rational SupplyCurve::at(const Rational& price) const {
  // Right-continuous: the last breakpoint at or below the price wins.
  const auto it = std::upper_bound(
      breakpoints_.begin(), breakpoints_.end(), price,
      [](const Rational& p, const SupplyStep& s) { return p < s.price; });
  if (it == breakpoints_.begin()) return breakpoints_.front().quantity;
  return std::prev(it)->quantity;
}

const RankedBidder& Market::find(const BidderId& id) const {
  return bidders_[rank_of(id)];
}

std::size_t Market::rank_of(const BidderId& id) const {
  for (std::size_t i = 0; i < bidders_.size(); ++i) {
    if (bidders_[i].id() == id) return i;
  }
  throw std::out_of_range("unknown bidder id '" + id + "'");
}

std::vector<RankedBidder> Market::participants() const {
  std::vector<RankedBidder> out;
  for (const auto& b : bidders_) {
    if (b.value() >= reserve_) out.push_back(b);
  }
  return out;
}

Market validate_env(const AuctionEnv& env) {
  if (env.bidders.empty()) throw Error(ErrorCode::kEmptyBidders, "at least one bidder is required");
  if (env.reserve.sign() < 0) {
    throw Error(ErrorCode::kNegativeReserve, "reserve " + env.reserve.str() + " < 0");
  }

  const auto steps = env.supply.breakpoints();
  if (steps.empty()) throw Error(ErrorCode::kNonMonotoneSupply, "supply curve has no breakpoints");
  for (std::size_t i = 0; i < steps.size(); ++i) {
    if (steps[i].quantity.sign() <= 0) {
      throw Error(ErrorCode::kNonPositiveQuantity,
                  "supply quantity " + steps[i].quantity.str() + " is not positive");
    }
    if (steps[i].price.sign() < 0) {
      throw Error(ErrorCode::kNonMonotoneSupply, "supply breakpoint at negative price");
    }
    if (i > 0) {
      if (steps[i].price <= steps[i - 1].price) {
        throw Error(ErrorCode::kNonMonotoneSupply, "supply breakpoints must strictly increase in price");
      }
      if (steps[i].quantity < steps[i - 1].quantity) {
        throw Error(ErrorCode::kNonMonotoneSupply,
                    "supply decreases from " + steps[i - 1].quantity.str() + " to " +
                        steps[i].quantity.str() + " at price " + steps[i].price.str());
      }
    }
  }

  std::set<BidderId> seen;
  Market market;
  market.supply_ = env.supply;
  market.reserve_ = env.reserve;
  for (std::size_t i = 0; i < env.bidders.size(); ++i) {
    const Bidder& b = env.bidders[i];
    if (!seen.insert(b.id).second) throw Error(ErrorCode::kDuplicateId, "bidder id '" + b.id + "' repeated");
    if (b.value.sign() <= 0) {
      throw Error(ErrorCode::kNonPositiveValue, "bidder '" + b.id + "' has value " + b.value.str());
    }
    if (b.quantity.sign() <= 0) {
      throw Error(ErrorCode::kNonPositiveQuantity, "bidder '" + b.id + "' has quantity " + b.quantity.str());
    }
    market.bidders_.push_back({b, i});
  }
  std::stable_sort(market.bidders_.begin(), market.bidders_.end(),
                   [](const RankedBidder& a, const RankedBidder& b) { return a.value() > b.value(); });
  return market;
}

Rational effective_demand(const Rational& quantity, const Rational& supply) {
  return min(quantity, supply);
}

Rational total_units(const Allocation& allocation) {
  Rational sum;
  for (const auto& [id, units] : allocation) sum += units;
  return sum;
}

std::string_view to_string(StepAction action) {
  switch (action) {
    case StepAction::kStopResidual: return "STOP_RESIDUAL";
    case StepAction::kStopExact: return "STOP_EXACT";
    case StepAction::kDrop: return "DROP";
    case StepAction::kStopLast: return "STOP_LAST";
    case StepAction::kRaiseFloor: return "RAISE_FLOOR";
  }
  return "?";
}

}  // namespace uniprice
