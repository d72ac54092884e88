#include "uniprice/solver.hpp"

#include <algorithm>
#include <functional>
#include <optional>

#include "uniprice/error.hpp"

namespace uniprice {

Rational indifference_price(const Rational& value, const Rational& quantity, const Rational& residual_payoff,
                            const SupplyCurve& curve) {
  const auto steps = curve.breakpoints();
  std::optional<Rational> accepted;
  std::optional<Rational> supremum;
  for (std::size_t s = 0; s < steps.size(); ++s) {
    const Rational demand = effective_demand(quantity, steps[s].quantity);
    const Rational root = value - residual_payoff / demand;
    const bool above_lo = s == 0 || root >= steps[s].price;
    const bool below_hi = s + 1 == steps.size() || root < steps[s + 1].price;
    if (above_lo && below_hi) {
      if (!accepted || root > *accepted) accepted = root;
    }
    if (above_lo) {
      const Rational cap = below_hi ? root : steps[s + 1].price;
      if (!supremum || cap > *supremum) supremum = cap;
    }
  }
  if (accepted) return *accepted;
  if (supremum) return *supremum;
  throw Error(ErrorCode::kNoThresholdSolution,
              "no supply segment admits an indifference price for value " + value.str());
}

namespace {

Rational sum_quantities(std::span<const RankedBidder> bidders) {
  Rational sum;
  for (const auto& b : bidders) sum += b.quantity();
  return sum;
}

std::vector<Bidder> plain(std::span<const RankedBidder> ranked) {
  std::vector<Bidder> out;
  out.reserve(ranked.size());
  for (const auto& r : ranked) out.push_back(r.bidder);
  return out;
}

std::vector<BidderId> ids_of(std::span<const RankedBidder> ranked) {
  std::vector<BidderId> out;
  for (const auto& r : ranked) out.push_back(r.id());
  return out;
}

// First breakpoint strictly above `price`.
std::optional<Rational> next_breakpoint(const SupplyCurve& curve, const Rational& price) {
  for (const auto& step : curve.breakpoints()) {
    if (step.price > price) return step.price;
  }
  return std::nullopt;
}

using ThresholdFn = std::function<std::vector<Threshold>(std::span<const RankedBidder>,
                                                         const Rational& supply, const Rational& floor)>;

// Shared loop of the constant- and increasing-supply procedures.
Outcome run_procedure(const Market& market, const ThresholdFn& thresholds) {
  Outcome out;
  for (const auto& b : market.bidders()) {
    out.allocation[b.id()] = 0;
    out.canonical_bids[b.id()] = b.value();
  }

  const SupplyCurve& curve = market.supply();
  std::vector<RankedBidder> active = market.participants();
  Rational floor = market.reserve();
  out.price = floor;

  if (active.empty()) return out;
  if (sum_quantities(active) <= curve.at(floor)) {
    for (const auto& b : active) {
      out.allocation[b.id()] = b.quantity();
      out.canonical_bids[b.id()] = floor;
    }
    return out;
  }

  std::optional<RankedBidder> last_dropped;
  for (std::size_t step = 1;; ++step) {
    const Rational supply = curve.at(floor);
    const Rational demand = sum_quantities(active);

    StepRecord rec;
    rec.step = step;
    rec.remaining = ids_of(active);
    rec.floor_price = floor;
    rec.supply = supply;

    if (last_dropped && demand <= supply) {
      // Remaining demand fits: everyone left wins in full at the floor and
      // the bidder who set the floor keeps whatever is left over.
      for (const auto& b : active) {
        out.allocation[b.id()] = b.quantity();
        out.canonical_bids[b.id()] = floor;
      }
      out.allocation[last_dropped->id()] = supply - demand;
      rec.action = StepAction::kStopExact;
      out.trace.push_back(std::move(rec));
      out.price = floor;
      return out;
    }

    if (active.size() == 1) {
      // A lone bidder facing a step curve may prefer a higher price that
      // unlocks more supply; ties keep the lower price.
      const RankedBidder& sole = active.front();
      Rational price = floor;
      Rational units = effective_demand(sole.quantity(), supply);
      Rational best = units * (sole.value() - floor);
      for (const auto& step : curve.breakpoints()) {
        if (step.price <= floor || step.price > sole.value()) continue;
        const Rational u = effective_demand(sole.quantity(), step.quantity);
        if (u * (sole.value() - step.price) > best) {
          best = u * (sole.value() - step.price);
          price = step.price;
          units = u;
        }
      }
      if (price == floor) units = supply;
      out.allocation[sole.id()] = units;
      out.canonical_bids[sole.id()] = price;
      rec.action = StepAction::kStopLast;
      rec.subject = sole.id();
      rec.floor_price = price;
      rec.supply = curve.at(price);
      out.trace.push_back(std::move(rec));
      out.price = price;
      return out;
    }

    const std::vector<Threshold> th = thresholds(active, supply, floor);
    for (std::size_t i = 0; i < active.size(); ++i) {
      rec.thresholds.push_back({active[i].id(), th[i].bar, th[i].hat, th[i].residual_type});
    }

    Rational lowest = th.front().hat;
    for (const auto& t : th) lowest = min(lowest, t.hat);

    // Supply grows before anyone's threshold is reached. While the active
    // bidders still overdemand the larger supply, the floor moves up to the
    // breakpoint and thresholds are recomputed there.
    if (const auto jump = next_breakpoint(curve, floor); jump && *jump < lowest) {
      const Rational grown = curve.at(*jump);
      Rational effective;
      for (const auto& b : active) effective += effective_demand(b.quantity(), grown);
      if (effective > grown) {
        rec.action = StepAction::kRaiseFloor;
        out.trace.push_back(std::move(rec));
        floor = *jump;
        continue;
      }
      // The larger supply covers everyone: the market clears at the jump.
      for (const auto& b : active) {
        out.allocation[b.id()] = effective_demand(b.quantity(), grown);
        out.canonical_bids[b.id()] = *jump;
      }
      rec.floor_price = *jump;
      rec.supply = grown;
      rec.action = StepAction::kStopExact;
      out.trace.push_back(std::move(rec));
      out.price = *jump;
      return out;
    }

    // Among bidders tied at the lowest threshold, a residual-type bidder
    // stops the procedure (largest residual claim, then latest input); only
    // when all of them are value-type is one dropped (latest input).
    std::optional<std::size_t> residual;
    std::optional<std::size_t> drop;
    for (std::size_t i = 0; i < active.size(); ++i) {
      if (th[i].hat != lowest) continue;
      if (th[i].residual_type) {
        if (!residual) {
          residual = i;
          continue;
        }
        const auto& cur = active[*residual];
        const auto& cand = active[i];
        if (cand.quantity() > cur.quantity() ||
            (cand.quantity() == cur.quantity() && cand.input_index > cur.input_index)) {
          residual = i;
        }
      } else {
        const auto& cand = active[i];
        if (!drop || cand.value() < active[*drop].value() ||
            (cand.value() == active[*drop].value() && cand.input_index > active[*drop].input_index)) {
          drop = i;
        }
      }
    }

    if (residual) {
      const RankedBidder& r = active[*residual];
      for (const auto& b : active) {
        out.allocation[b.id()] = b.quantity();
        out.canonical_bids[b.id()] = lowest;
      }
      out.allocation[r.id()] = supply - (demand - r.quantity());
      out.canonical_bids[r.id()] = floor;
      out.residual = r.id();
      rec.action = StepAction::kStopResidual;
      rec.subject = r.id();
      out.trace.push_back(std::move(rec));
      out.price = floor;
      return out;
    }

    const RankedBidder dropped = active[*drop];
    rec.action = StepAction::kDrop;
    rec.subject = dropped.id();
    out.trace.push_back(std::move(rec));
    out.dropout_order.push_back(dropped.id());
    out.canonical_bids[dropped.id()] = dropped.value();
    floor = dropped.value();
    last_dropped = dropped;
    active.erase(active.begin() + static_cast<std::ptrdiff_t>(*drop));
  }
}

}  // namespace

std::vector<Threshold> step_thresholds(std::span<const Bidder> active, const Rational& supply,
                                       const Rational& floor_price) {
  Rational total;
  for (const auto& b : active) total += effective_demand(b, supply);
  if (active.empty() || total <= supply) {
    throw Error(ErrorCode::kInsufficientCompetition,
                "effective demand " + total.str() + " does not exceed supply " + supply.str());
  }

  std::vector<Threshold> out;
  out.reserve(active.size());
  for (const auto& b : active) {
    const Rational own = effective_demand(b, supply);
    const Rational rivals = total - own;
    Threshold t;
    t.bar = ((total - supply) * b.value + (supply - rivals) * floor_price) / own;
    t.hat = min(b.value, t.bar);
    t.residual_type = rivals < supply;
    out.push_back(std::move(t));
  }
  return out;
}

Outcome solve_equilibrium(const Market& market) {
  if (!market.supply().is_constant()) {
    throw Error(ErrorCode::kUnsupportedSupply, "solve_equilibrium needs a constant supply; use solve_increasing_supply");
  }
  return run_procedure(market, [](std::span<const RankedBidder> active, const Rational& supply,
                                  const Rational& floor) {
    const std::vector<Bidder> bidders = plain(active);
    return step_thresholds(bidders, supply, floor);
  });
}

Outcome solve_increasing_supply(const Market& market) {
  const SupplyCurve& curve = market.supply();
  return run_procedure(market, [&curve](std::span<const RankedBidder> active, const Rational& supply,
                                        const Rational& floor) {
    Rational total;
    for (const auto& b : active) total += effective_demand(b.quantity(), supply);

    std::vector<Threshold> out;
    for (const auto& b : active) {
      const Rational rivals = total - effective_demand(b.quantity(), supply);
      // Payoff from conceding at the floor and taking the residual.
      const Rational residual_payoff = (supply - rivals) * (b.value() - floor);
      Threshold t;
      t.bar = indifference_price(b.value(), b.quantity(), residual_payoff, curve);
      t.hat = min(b.value(), t.bar);
      t.residual_type = rivals < supply;
      out.push_back(std::move(t));
    }
    return out;
  });
}

Outcome solve(const Market& market) {
  return market.supply().is_constant() ? solve_equilibrium(market) : solve_increasing_supply(market);
}

}  // namespace uniprice
