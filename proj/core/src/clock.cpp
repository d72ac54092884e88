#include "uniprice/clock.hpp"

#include <algorithm>

#include "uniprice/error.hpp"
#include "uniprice/solver.hpp"

namespace uniprice {

Rational ClockContext::own_quantity() const {
  for (const auto& [id, q] : active) {
    if (id == self) return q;
  }
  throw std::logic_error("bidder '" + self + "' is not active");
}

Rational ClockContext::rivals_effective_demand(const Rational& m) const {
  Rational sum;
  for (const auto& [id, q] : active) {
    if (id != self) sum += effective_demand(q, m);
  }
  return sum;
}

Rational dominant_threshold(const Rational& value, const Rational& provisional_price,
                            const Rational& others_effective_demand, const Rational& supply,
                            const Rational& own_effective_demand) {
  const Rational bar =
      value + (others_effective_demand - supply) * (value - provisional_price) / own_effective_demand;
  return min(value, bar);
}

namespace {

class TruthfulStrategy final : public Strategy {
 public:
  explicit TruthfulStrategy(Bidder bidder) : bidder_(std::move(bidder)) {}

  bool enters(const Rational& opening_price) const override { return bidder_.value >= opening_price; }

  ClockAction decide(const ClockContext& ctx) const override {
    return ctx.current_price <= drop_price(ctx) ? ClockAction::kRemain : ClockAction::kDrop;
  }

  Rational drop_price(const ClockContext& ctx) const override {
    const SupplyCurve& curve = *ctx.supply;
    const Rational m = curve.at(ctx.provisional_price);
    const Rational others = ctx.rivals_effective_demand(m);
    if (curve.is_constant()) {
      return dominant_threshold(bidder_.value, ctx.provisional_price, others, m,
                                effective_demand(bidder_.quantity, m));
    }
    const Rational residual_payoff = (m - others) * (bidder_.value - ctx.provisional_price);
    return min(bidder_.value, indifference_price(bidder_.value, bidder_.quantity, residual_payoff, curve));
  }

 private:
  Bidder bidder_;
};

class FixedDropStrategy final : public Strategy {
 public:
  explicit FixedDropStrategy(Rational price) : price_(std::move(price)) {}

  bool enters(const Rational&) const override { return true; }
  ClockAction decide(const ClockContext& ctx) const override {
    return ctx.current_price < price_ ? ClockAction::kRemain : ClockAction::kDrop;
  }
  Rational drop_price(const ClockContext&) const override { return price_; }

 private:
  Rational price_;
};

class DecisionStrategy final : public Strategy {
 public:
  DecisionStrategy(std::function<ClockAction(const ClockContext&)> decide, std::vector<Rational> grid)
      : decide_(std::move(decide)), grid_(std::move(grid)) {
    if (grid_.empty()) throw std::invalid_argument("decision strategy needs a price grid");
  }

  bool enters(const Rational&) const override { return true; }

  ClockAction decide(const ClockContext& ctx) const override { return decide_(ctx); }

  Rational drop_price(const ClockContext& ctx) const override {
    ClockContext probe = ctx;
    std::optional<Rational> first_drop;
    for (const Rational& price : grid_) {
      if (price < ctx.current_price) continue;
      probe.current_price = price;
      const ClockAction action = decide_(probe);
      if (action == ClockAction::kDrop && !first_drop) {
        first_drop = price;
      } else if (action == ClockAction::kRemain && first_drop) {
        throw Error(ErrorCode::kNonMonotoneStrategy, "strategy of '" + ctx.self + "' drops at " +
                                                         first_drop->str() + " but remains at " + price.str());
      }
    }
    return first_drop ? *first_drop : max(grid_.back(), ctx.current_price);
  }

 private:
  std::function<ClockAction(const ClockContext&)> decide_;
  std::vector<Rational> grid_;
};

}  // namespace

StrategyPtr truthful_strategy(const Bidder& bidder) { return std::make_shared<TruthfulStrategy>(bidder); }

StrategyPtr fixed_drop_strategy(Rational price) { return std::make_shared<FixedDropStrategy>(std::move(price)); }

StrategyPtr decision_strategy(std::function<ClockAction(const ClockContext&)> decide,
                              std::vector<Rational> price_grid) {
  return std::make_shared<DecisionStrategy>(std::move(decide), std::move(price_grid));
}

std::string_view to_string(FinishCase c) {
  switch (c) {
    case FinishCase::kResidual: return "RESIDUAL";
    case FinishCase::kExact: return "EXACT";
    case FinishCase::kLast: return "LAST";
  }
  return "?";
}

bool operator==(const OpenEvent& a, const OpenEvent& b) { return a.price == b.price && a.active == b.active; }
bool operator==(const DropoutEvent& a, const DropoutEvent& b) {
  return a.bidder == b.bidder && a.price == b.price;
}
bool operator==(const ProvisionalUpdateEvent& a, const ProvisionalUpdateEvent& b) { return a.price == b.price; }
bool operator==(const FinishEvent& a, const FinishEvent& b) {
  return a.price == b.price && a.allocation == b.allocation && a.kind == b.kind;
}

ClockState::ClockState(const Market& market, std::vector<BidderId> entrants)
    : market_(&market),
      provisional_(market.reserve()),
      current_(market.reserve()),
      active_(std::move(entrants)) {
  events_.push_back(OpenEvent{current_, active_});
  if (active_.empty()) {
    FinishEvent fin{provisional_, {}, FinishCase::kExact};
    for (const auto& b : market.bidders()) fin.allocation[b.id()] = 0;
    finish_ = fin;
    events_.push_back(std::move(fin));
  }
}

ClockContext ClockState::context_for(const BidderId& id) const {
  ClockContext ctx;
  ctx.self = id;
  ctx.provisional_price = provisional_;
  ctx.current_price = current_;
  ctx.supply = &market_->supply();
  for (const auto& a : active_) ctx.active.emplace_back(a, market_->find(a).quantity());
  return ctx;
}

std::vector<ClockEvent> ClockState::apply_dropout(const BidderId& id, const Rational& price) {
  if (finished()) throw Error(ErrorCode::kInvalidEventLog, "dropout after the auction finished");
  const auto it = std::find(active_.begin(), active_.end(), id);
  if (it == active_.end()) throw Error(ErrorCode::kInvalidEventLog, "'" + id + "' is not active");
  if (price < current_) {
    throw Error(ErrorCode::kInvalidEventLog, "clock cannot move back from " + current_.str() + " to " + price.str());
  }

  std::vector<ClockEvent> emitted;
  current_ = price;
  active_.erase(it);
  dropped_.push_back(id);
  exit_prices_[id] = price;
  emitted.push_back(DropoutEvent{id, price});

  const SupplyCurve& curve = market_->supply();
  const Rational& dropper_q = market_->find(id).quantity();

  std::optional<FinishEvent> fin;
  auto start_finish = [&](const Rational& final_price, FinishCase kind) {
    fin = FinishEvent{final_price, {}, kind};
    for (const auto& b : market_->bidders()) fin->allocation[b.id()] = 0;
  };

  // Can the remaining bidders cover the supply at the provisional price?
  const Rational m_old = curve.at(provisional_);
  Rational covered;
  for (const auto& a : active_) covered += effective_demand(market_->find(a).quantity(), m_old);

  if (covered < m_old) {
    // The dropper concedes: it takes the residual at the provisional price.
    start_finish(provisional_, FinishCase::kResidual);
    Rational taken;
    for (const auto& a : active_) {
      const Rational& q = market_->find(a).quantity();
      fin->allocation[a] = q;
      taken += q;
    }
    fin->allocation[id] = max(Rational(0), min(effective_demand(dropper_q, m_old), m_old - taken));
    residual_ = id;
  } else {
    provisional_ = price;
    emitted.push_back(ProvisionalUpdateEvent{price});
    const Rational m_new = curve.at(provisional_);
    Rational demand;
    for (const auto& a : active_) demand += effective_demand(market_->find(a).quantity(), m_new);
    if (demand <= m_new) {
      start_finish(provisional_, active_.size() == 1 ? FinishCase::kLast : FinishCase::kExact);
      for (const auto& a : active_) fin->allocation[a] = effective_demand(market_->find(a).quantity(), m_new);
      fin->allocation[id] = min(effective_demand(dropper_q, m_new), m_new - demand);
    }
  }

  if (fin) {
    finish_ = *fin;
    emitted.push_back(std::move(*fin));
  }
  events_.insert(events_.end(), emitted.begin(), emitted.end());
  return emitted;
}

Outcome ClockState::outcome() const {
  if (!finish_) throw std::logic_error("clock auction has not finished");
  Outcome out;
  out.price = finish_->price;
  out.allocation = finish_->allocation;
  out.dropout_order = dropped_;
  out.residual = residual_;
  out.canonical_bids = exit_prices_;
  for (const auto& a : active_) out.canonical_bids[a] = current_;
  return out;
}

ClockRun run_clock_auction(const Market& market, const StrategyMap& strategies) {
  std::map<BidderId, const Strategy*> lookup;
  std::vector<BidderId> entrants;
  for (const auto& b : market.bidders()) {
    const auto it = strategies.find(b.id());
    if (it == strategies.end() || !it->second) {
      throw Error(ErrorCode::kMissingStrategy, "no strategy for bidder '" + b.id() + "'");
    }
    lookup[b.id()] = it->second.get();
    if (it->second->enters(market.reserve())) entrants.push_back(b.id());
  }

  ClockState state(market, std::move(entrants));
  while (!state.finished()) {
    const auto active = state.active();
    std::vector<Rational> exits;
    exits.reserve(active.size());
    for (const auto& id : active) {
      exits.push_back(max(state.current_price(), lookup[id]->drop_price(state.context_for(id))));
    }
    const Rational next = *std::min_element(exits.begin(), exits.end());

    // Order simultaneous exits: auction-ending dropouts first.
    const Rational m = market.supply().at(state.provisional_price());
    Rational total;
    for (const auto& id : active) total += effective_demand(market.find(id).quantity(), m);

    std::optional<std::size_t> pick;
    auto better = [&](std::size_t cand, std::size_t cur) {
      const auto& c = market.find(active[cand]);
      const auto& o = market.find(active[cur]);
      const bool c_ends = total - effective_demand(c.quantity(), m) < m;
      const bool o_ends = total - effective_demand(o.quantity(), m) < m;
      if (c_ends != o_ends) return c_ends;
      if (c_ends && c.quantity() != o.quantity()) return c.quantity() > o.quantity();
      return c.input_index > o.input_index;
    };
    for (std::size_t i = 0; i < active.size(); ++i) {
      if (exits[i] != next) continue;
      if (!pick || better(i, *pick)) pick = i;
    }
    const BidderId leaving = active[*pick];
    state.apply_dropout(leaving, next);
  }

  return ClockRun{state.outcome(), std::vector<ClockEvent>(state.events().begin(), state.events().end())};
}

StrategyMap truthful_strategies(const Market& market) {
  StrategyMap out;
  for (const auto& b : market.bidders()) out[b.id()] = truthful_strategy(b.bidder);
  return out;
}

Outcome replay_events(const Market& market, std::span<const ClockEvent> events) {
  if (events.empty() || !std::holds_alternative<OpenEvent>(events.front())) {
    throw Error(ErrorCode::kInvalidEventLog, "log must start with the opening event");
  }
  const auto& open = std::get<OpenEvent>(events.front());
  if (open.price != market.reserve()) {
    throw Error(ErrorCode::kInvalidEventLog, "clock must open at the reserve price");
  }
  ClockState state(market, open.active);

  std::size_t i = 1;
  if (state.finished()) {
    // An empty auction finishes as soon as it opens.
    if (events.size() != 2 || !(events[1] == state.events().back())) {
      throw Error(ErrorCode::kInvalidEventLog, "empty auction must finish immediately");
    }
    return state.outcome();
  }
  while (i < events.size()) {
    const auto* drop = std::get_if<DropoutEvent>(&events[i]);
    if (!drop) throw Error(ErrorCode::kInvalidEventLog, "expected a dropout at position " + std::to_string(i));
    for (const ClockEvent& produced : state.apply_dropout(drop->bidder, drop->price)) {
      if (i >= events.size() || !(events[i] == produced)) {
        throw Error(ErrorCode::kInvalidEventLog, "log diverges from the protocol at position " + std::to_string(i));
      }
      ++i;
    }
  }
  if (!state.finished()) throw Error(ErrorCode::kInvalidEventLog, "log ends before the auction finishes");
  return state.outcome();
}

}  // namespace uniprice
