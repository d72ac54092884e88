#include "uniprice/oracle.hpp"

#include <algorithm>
#include <map>
#include <tuple>

#include "uniprice/error.hpp"

namespace uniprice {

void GridConfig::validate() const {
  if (epsilon.sign() <= 0) throw Error(ErrorCode::kInvalidGrid, "epsilon must be positive");
  if (max_bid.sign() < 0) throw Error(ErrorCode::kInvalidGrid, "max_bid must be nonnegative");
  if (!(max_bid / epsilon).is_integer()) {
    throw Error(ErrorCode::kInvalidGrid,
                "max_bid " + max_bid.str() + " is not a multiple of epsilon " + epsilon.str());
  }
}

std::vector<Rational> GridConfig::points() const {
  validate();
  const auto count = static_cast<std::int64_t>(floor_integer(max_bid / epsilon));
  std::vector<Rational> out;
  out.reserve(static_cast<std::size_t>(count + 1));
  for (std::int64_t k = 0; k <= count; ++k) out.push_back(epsilon * Rational(k));
  return out;
}

bool GridConfig::contains(const Rational& bid) const {
  return bid.sign() >= 0 && bid <= max_bid && (bid / epsilon).is_integer();
}

Rational GridConfig::ceil(const Rational& bid) const {
  return epsilon * Rational(ceil_integer(bid / epsilon), 1);
}

namespace {

struct Entry {
  std::size_t rank;
  Rational bid;
};

Rational bid_of(const BidProfile& profile, const BidderId& id) {
  const auto it = profile.find(id);
  return it == profile.end() ? Rational(0) : it->second;
}

}  // namespace

Clearing clear_sealed_bid(const Market& market, const BidProfile& profile) {
  const auto bidders = market.bidders();
  Clearing out;
  for (const auto& b : bidders) out.allocation[b.id()] = 0;

  std::vector<Entry> entries;
  for (std::size_t r = 0; r < bidders.size(); ++r) {
    Rational bid = bid_of(profile, bidders[r].id());
    if (bid >= market.reserve()) entries.push_back({r, std::move(bid)});
  }
  if (entries.empty()) return out;

  // Ranked order already encodes value-then-input priority.
  std::stable_sort(entries.begin(), entries.end(),
                   [](const Entry& a, const Entry& b) { return a.bid > b.bid; });

  const SupplyCurve& curve = market.supply();
  auto fill = [&](const Rational& level) {
    Rational left = curve.at(level);
    for (const auto& e : entries) {
      if (e.bid < level || left.sign() <= 0) break;
      const Rational units = min(effective_demand(bidders[e.rank].quantity(), curve.at(level)), left);
      out.allocation[bidders[e.rank].id()] = units;
      left -= units;
    }
  };

  Rational total;
  const Rational supply_at_reserve = curve.at(market.reserve());
  for (const auto& e : entries) total += effective_demand(bidders[e.rank].quantity(), supply_at_reserve);
  if (total <= supply_at_reserve) {
    fill(market.reserve());
    out.price = market.reserve();
    return out;
  }

  // Highest bid level at which the accepted demand covers the supply there.
  Rational demand;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const Rational& level = entries[i].bid;
    if (i + 1 < entries.size() && entries[i + 1].bid == level) continue;
    const Rational supply = curve.at(level);
    demand = 0;
    for (std::size_t j = 0; j <= i; ++j) demand += effective_demand(bidders[entries[j].rank].quantity(), supply);
    if (demand >= supply) {
      fill(level);
      out.price = level;
      return out;
    }
  }
  // Only reachable for step curves: supply at every bid level exceeds the
  // demand there, so every accepted bid is filled at the lowest one.
  fill(entries.back().bid);
  out.price = entries.back().bid;
  return out;
}

Rational payoff(const Market& market, const BidProfile& profile, const BidderId& bidder) {
  const Clearing c = clear_sealed_bid(market, profile);
  const Rational& units = c.allocation.at(bidder);
  if (units.sign() == 0 || !c.price) return 0;
  return units * (market.find(bidder).value() - *c.price);
}

BestResponse best_response_on_grid(const Market& market, const BidProfile& profile, const BidderId& bidder,
                                   const GridConfig& grid) {
  BidProfile trial = profile;
  std::optional<BestResponse> best;
  for (const Rational& bid : grid.points()) {
    trial[bidder] = bid;
    Rational p = payoff(market, trial, bidder);
    if (!best || p > best->payoff) best = BestResponse{bid, std::move(p)};
  }
  return *best;
}

NashVerdict verify_epsilon_nash(const Market& market, const BidProfile& profile, const GridConfig& grid) {
  const std::vector<Rational> points = grid.points();
  for (const auto& b : market.bidders()) {
    const Rational bid = bid_of(profile, b.id());
    if (!grid.contains(bid)) {
      throw Error(ErrorCode::kOffGrid, "bid " + bid.str() + " of bidder '" + b.id() + "' is not on the grid");
    }
  }

  BidProfile trial = profile;
  for (const auto& b : market.bidders()) {
    const Rational current = payoff(market, profile, b.id());
    std::optional<Deviation> best;
    for (const Rational& bid : points) {
      trial[b.id()] = bid;
      const Rational gain = payoff(market, trial, b.id()) - current;
      if (gain.sign() > 0 && (!best || gain > best->gain)) best = Deviation{b.id(), bid, gain};
    }
    trial[b.id()] = bid_of(profile, b.id());
    if (best) return *best;
  }
  return Verified{};
}

std::vector<EquilibriumClass> enumerate_equilibria_on_grid(const Market& market, const GridConfig& grid,
                                                           std::uint64_t budget) {
  const std::vector<Rational> points = grid.points();
  const auto bidders = market.bidders();
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < bidders.size(); ++i) {
    if (total > budget / points.size()) {
      throw Error(ErrorCode::kBudgetExceeded, std::to_string(points.size()) + "^" +
                                                  std::to_string(bidders.size()) + " profiles exceed budget " +
                                                  std::to_string(budget));
    }
    total *= points.size();
  }

  using Key = std::tuple<std::optional<Rational>, Allocation>;
  std::map<Key, std::vector<BidProfile>> groups;

  std::vector<std::size_t> digits(bidders.size(), 0);
  BidProfile profile;
  for (const auto& b : bidders) profile[b.id()] = points.front();
  for (std::uint64_t n = 0; n < total; ++n) {
    if (std::holds_alternative<Verified>(verify_epsilon_nash(market, profile, grid))) {
      Clearing c = clear_sealed_bid(market, profile);
      groups[Key{c.price, std::move(c.allocation)}].push_back(profile);
    }
    // Odometer over ranked bidders, last bidder fastest.
    for (std::size_t i = bidders.size(); i-- > 0;) {
      if (++digits[i] < points.size()) {
        profile[bidders[i].id()] = points[digits[i]];
        break;
      }
      digits[i] = 0;
      profile[bidders[i].id()] = points.front();
    }
  }

  std::vector<EquilibriumClass> out;
  for (auto& [key, profiles] : groups) {
    out.push_back({std::get<0>(key), std::get<1>(key), std::move(profiles)});
  }
  return out;
}

Outcome two_bidder_equilibrium(const Market& market) {
  const auto bidders = market.bidders();
  if (bidders.size() != 2) {
    throw Error(ErrorCode::kNotTwoBidders, "closed form needs exactly two bidders, got " + std::to_string(bidders.size()));
  }
  if (!market.supply().is_constant() || market.reserve().sign() != 0) {
    throw Error(ErrorCode::kUnsupportedSupply, "closed form covers constant supply without reserve");
  }
  const Rational m = market.supply().at(0);
  const RankedBidder& hi = bidders[0];
  const RankedBidder& lo = bidders[1];
  const Rational& v1 = hi.value();
  const Rational& v2 = lo.value();
  const Rational& q1 = hi.quantity();
  const Rational& q2 = lo.quantity();

  Outcome out;
  out.price = 0;
  out.allocation = {{hi.id(), 0}, {lo.id(), 0}};

  if (q1 + q2 <= m) {
    out.allocation = {{hi.id(), q1}, {lo.id(), q2}};
    out.canonical_bids = {{hi.id(), 0}, {lo.id(), 0}};
    return out;
  }

  auto high_wins_at_low_value = [&] {
    out.price = v2;
    out.allocation[hi.id()] = m;
    out.canonical_bids = {{hi.id(), v2}, {lo.id(), v2}};
    out.dropout_order = {lo.id()};
  };
  // `winner` bids `bid` and takes its quantity; the other bids zero and
  // takes the residual at price zero.
  auto concede = [&](const RankedBidder& winner, const RankedBidder& loser, const Rational& bid) {
    out.allocation[winner.id()] = winner.quantity();
    out.allocation[loser.id()] = m - winner.quantity();
    out.canonical_bids = {{winner.id(), bid}, {loser.id(), 0}};
    out.residual = loser.id();
  };

  if (q1 >= m && q2 >= m) {
    high_wins_at_low_value();
  } else if (q1 >= m) {
    if (v1 * q2 > m * v2) {
      high_wins_at_low_value();
    } else {
      concede(lo, hi, q2 * v1 / m);
    }
  } else if (q2 >= m) {
    concede(hi, lo, q1 * v2 / m);
  } else {
    const Rational overlap = q1 + q2 - m;
    const Rational bar1 = overlap * v1 / q1;
    const Rational bar2 = overlap * v2 / q2;
    // The bidder with the lower threshold concedes. On a tie the larger
    // residual claim (larger own quantity) concedes, then the later input.
    bool hi_concedes = bar1 < bar2;
    if (bar1 == bar2) hi_concedes = q1 > q2 || (q1 == q2 && hi.input_index > lo.input_index);
    if (hi_concedes) {
      concede(lo, hi, bar1);
    } else {
      concede(hi, lo, bar2);
    }
  }
  return out;
}

BidProfile grid_profile(const Outcome& outcome, const GridConfig& grid) {
  BidProfile out;
  for (const auto& [id, bid] : outcome.canonical_bids) {
    if (bid > outcome.price) {
      out[id] = grid.ceil(bid);
    } else if (grid.contains(bid)) {
      out[id] = bid;
    } else {
      throw Error(ErrorCode::kOffGrid, "bid " + bid.str() + " of bidder '" + id + "' is not on the grid");
    }
  }
  return out;
}

}  // namespace uniprice
