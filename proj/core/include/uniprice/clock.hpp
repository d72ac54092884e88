#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "uniprice/model.hpp"

namespace uniprice {

/// What a bidder observes while the clock runs. Quantities are public.
struct ClockContext {
  BidderId self;
  Rational provisional_price;
  Rational current_price;
  const SupplyCurve* supply = nullptr;
  std::vector<std::pair<BidderId, Rational>> active;  // id, quantity; includes self

  Rational own_quantity() const;
  /// Sum of min(q_j, m) over active rivals.
  Rational rivals_effective_demand(const Rational& m) const;
};

enum class ClockAction { kRemain, kDrop };

/// A stationary clock strategy. The simulator jumps from event to event, so
/// besides the pointwise decision a strategy reports the price at which it
/// would leave if the provisional price and active set stayed unchanged.
class Strategy {
 public:
  virtual ~Strategy() = default;

  /// Whether the bidder takes part when the clock opens at `opening_price`.
  virtual bool enters(const Rational& opening_price) const = 0;
  virtual ClockAction decide(const ClockContext& ctx) const = 0;
  virtual Rational drop_price(const ClockContext& ctx) const = 0;
};

using StrategyPtr = std::shared_ptr<const Strategy>;
using StrategyMap = std::map<BidderId, StrategyPtr>;

/// Largest clock price at which remaining active is weakly dominant:
/// min(v, v + (others - m)(v - p*) / own).
Rational dominant_threshold(const Rational& value, const Rational& provisional_price,
                            const Rational& others_effective_demand, const Rational& supply,
                            const Rational& own_effective_demand);

/// Remain while the clock is at or below the dominant threshold.
StrategyPtr truthful_strategy(const Bidder& bidder);

/// Enters, then leaves at `price` (or immediately, once the clock is past it).
StrategyPtr fixed_drop_strategy(Rational price);

/// Wraps an arbitrary decision function. Drop prices are searched on
/// `price_grid` (ascending); a function that drops at some grid price and
/// remains at a later one throws kNonMonotoneStrategy. Past the grid the
/// bidder drops.
StrategyPtr decision_strategy(std::function<ClockAction(const ClockContext&)> decide,
                              std::vector<Rational> price_grid);

enum class FinishCase { kResidual, kExact, kLast };

std::string_view to_string(FinishCase c);

struct OpenEvent {
  Rational price;
  std::vector<BidderId> active;
};
struct DropoutEvent {
  BidderId bidder;
  Rational price;
};
struct ProvisionalUpdateEvent {
  Rational price;
};
struct FinishEvent {
  Rational price;
  Allocation allocation;
  FinishCase kind = FinishCase::kResidual;
};

using ClockEvent = std::variant<OpenEvent, DropoutEvent, ProvisionalUpdateEvent, FinishEvent>;

bool operator==(const OpenEvent& a, const OpenEvent& b);
bool operator==(const DropoutEvent& a, const DropoutEvent& b);
bool operator==(const ProvisionalUpdateEvent& a, const ProvisionalUpdateEvent& b);
bool operator==(const FinishEvent& a, const FinishEvent& b);

/// The auctioneer's bookkeeping. Strategies never touch it directly; the
/// simulator and the replayer feed it dropouts.
class ClockState {
 public:
  /// Opens the clock at the reserve with `entrants` active.
  ClockState(const Market& market, std::vector<BidderId> entrants);

  const Rational& provisional_price() const { return provisional_; }
  const Rational& current_price() const { return current_; }
  std::span<const BidderId> active() const { return active_; }
  bool finished() const { return finish_.has_value(); }
  const std::optional<FinishEvent>& finish() const { return finish_; }
  std::span<const ClockEvent> events() const { return events_; }

  ClockContext context_for(const BidderId& id) const;

  /// Processes bidder `id` leaving at `price`; returns the events emitted.
  std::vector<ClockEvent> apply_dropout(const BidderId& id, const Rational& price);

  /// Outcome once finished: price, allocation, exit prices as bids.
  Outcome outcome() const;

 private:
  const Market* market_;
  Rational provisional_;
  Rational current_;
  std::vector<BidderId> active_;
  std::vector<BidderId> dropped_;
  BidProfile exit_prices_;
  std::optional<BidderId> residual_;
  std::optional<FinishEvent> finish_;
  std::vector<ClockEvent> events_;
};

struct ClockRun {
  Outcome outcome;
  std::vector<ClockEvent> events;
};

/// Event-driven simulation. Simultaneous dropouts are fed to the auctioneer
/// one at a time: those that end the auction first (largest quantity, then
/// latest input), then the rest (latest input first); everyone is re-queried
/// after each dropout.
ClockRun run_clock_auction(const Market& market, const StrategyMap& strategies);

/// Truthful strategies for every bidder.
StrategyMap truthful_strategies(const Market& market);

/// Rebuilds the outcome from a recorded log. Throws kInvalidEventLog if the
/// log's updates or finish disagree with the auctioneer's protocol.
Outcome replay_events(const Market& market, std::span<const ClockEvent> events);

}  // namespace uniprice
