#include "uniprice/dynamics.hpp"

#include <algorithm>

#include "uniprice/error.hpp"
#include "uniprice/oracle.hpp"

namespace uniprice {

DiscriminatoryClearing discriminatory_clear(const Market& market, const BidProfile& profile) {
  DiscriminatoryClearing out;
  out.allocation = clear_sealed_bid(market, profile).allocation;
  for (const auto& [id, units] : out.allocation) {
    const auto it = profile.find(id);
    const Rational bid = it == profile.end() ? Rational(0) : it->second;
    out.payments[id] = units.sign() > 0 ? units * bid : Rational(0);
  }
  return out;
}

Rational discriminatory_payoff(const Market& market, const BidProfile& profile, const BidderId& bidder) {
  const DiscriminatoryClearing c = discriminatory_clear(market, profile);
  return c.allocation.at(bidder) * market.find(bidder).value() - c.payments.at(bidder);
}

DynamicsResult best_response_dynamics(const Market& market, const DynamicsConfig& config) {
  if (market.size() > 2) {
    throw Error(ErrorCode::kUnsupportedBidderCount,
                "best-response dynamics support at most two bidders, got " + std::to_string(market.size()));
  }
  if (!market.supply().is_constant()) {
    throw Error(ErrorCode::kUnsupportedSupply, "best-response dynamics need a constant supply");
  }
  GridConfig grid{config.epsilon, market.max_value()};
  grid.validate();
  const std::vector<Rational> points = grid.points();

  std::vector<BidderId> order(market.size());
  for (const auto& b : market.bidders()) order[b.input_index] = b.id();

  BidProfile profile;
  for (const auto& id : order) {
    const auto it = config.initial.find(id);
    profile[id] = it == config.initial.end() ? Rational(0) : it->second;
    if (!grid.contains(profile[id])) {
      throw Error(ErrorCode::kOffGrid, "initial bid " + profile[id].str() + " of " + id + " is off the grid");
    }
  }

  DynamicsResult out;
  out.verdict = BudgetExhausted{};
  std::map<std::pair<BidProfile, std::size_t>, std::size_t> seen;
  std::size_t unchanged = 0;
  const std::size_t total_moves = config.max_rounds * order.size();

  for (std::size_t k = 0; k < total_moves; ++k) {
    const std::size_t mover = k % order.size();
    const BidderId& id = order[mover];

    Rational best_bid = points.front();
    Rational best_payoff;
    bool first = true;
    BidProfile trial = profile;
    for (const auto& p : points) {
      trial[id] = p;
      const Rational u = discriminatory_payoff(market, trial, id);
      if (first || u > best_payoff) {
        best_payoff = u;
        best_bid = p;
        first = false;
      }
    }

    unchanged = best_bid == profile[id] ? unchanged + 1 : 0;
    profile[id] = best_bid;
    out.trajectory.push_back(profile);
    out.movers.push_back(id);

    if (unchanged >= order.size()) {
      out.verdict = Converged{};
      return out;
    }
    const auto key = std::make_pair(profile, (k + 1) % order.size());
    const auto [it, inserted] = seen.emplace(key, k);
    if (!inserted) {
      out.verdict = Cycle{k - it->second, it->second};
      return out;
    }
  }
  return out;
}

}  // namespace uniprice
