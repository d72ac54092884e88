#include "uniprice/procurement.hpp"

#include <algorithm>
#include <optional>
#include <set>

#include "uniprice/error.hpp"
#include "uniprice/solver.hpp"

namespace uniprice {

std::vector<RankedSeller> ProcurementMarket::participants() const {
  std::vector<RankedSeller> out;
  for (const auto& s : sellers_) {
    if (s.cost() < price_cap_) out.push_back(s);
  }
  return out;
}

ProcurementMarket validate_procurement(const ProcurementEnv& env) {
  if (env.sellers.empty()) throw Error(ErrorCode::kEmptyBidders, "no sellers");
  if (env.demand.sign() <= 0) {
    throw Error(ErrorCode::kNonPositiveQuantity, "demand must be positive, got " + env.demand.str());
  }
  if (env.price_cap.sign() <= 0) {
    throw Error(ErrorCode::kCapBelowCost, "price cap must be positive, got " + env.price_cap.str());
  }
  std::set<BidderId> seen;
  for (const auto& s : env.sellers) {
    if (!seen.insert(s.id).second) throw Error(ErrorCode::kDuplicateId, "duplicate seller id " + s.id);
    if (s.cost.sign() <= 0) {
      throw Error(ErrorCode::kNonPositiveValue, "seller " + s.id + " has non-positive cost " + s.cost.str());
    }
    if (s.capacity.sign() <= 0) {
      throw Error(ErrorCode::kNonPositiveQuantity,
                  "seller " + s.id + " has non-positive capacity " + s.capacity.str());
    }
  }

  ProcurementMarket m;
  m.demand_ = env.demand;
  m.price_cap_ = env.price_cap;
  for (std::size_t i = 0; i < env.sellers.size(); ++i) m.sellers_.push_back({env.sellers[i], i});
  std::stable_sort(m.sellers_.begin(), m.sellers_.end(),
                   [](const RankedSeller& a, const RankedSeller& b) { return a.cost() < b.cost(); });
  if (m.participants().empty()) {
    throw Error(ErrorCode::kCapBelowCost, "price cap " + env.price_cap.str() + " does not exceed any seller's cost");
  }
  return m;
}

namespace {

Rational sum_capacity(std::span<const RankedSeller> sellers) {
  Rational sum;
  for (const auto& s : sellers) sum += s.capacity();
  return sum;
}

}  // namespace

Outcome solve_procurement(const ProcurementMarket& market) {
  Outcome out;
  const Rational cap = market.price_cap();
  const Rational demand = market.demand();
  for (const auto& s : market.sellers()) {
    out.allocation[s.id()] = 0;
    out.canonical_bids[s.id()] = s.cost();
  }

  std::vector<RankedSeller> active = market.participants();
  Rational ceiling = cap;
  out.price = ceiling;

  if (sum_capacity(active) <= demand) {
    for (const auto& s : active) {
      out.allocation[s.id()] = s.capacity();
      out.canonical_bids[s.id()] = ceiling;
    }
    return out;
  }

  std::optional<RankedSeller> last_dropped;
  for (std::size_t step = 1;; ++step) {
    const Rational offered = sum_capacity(active);

    StepRecord rec;
    rec.step = step;
    for (const auto& s : active) rec.remaining.push_back(s.id());
    rec.floor_price = ceiling;
    rec.supply = demand;

    if (last_dropped && offered <= demand) {
      for (const auto& s : active) {
        out.allocation[s.id()] = s.capacity();
        out.canonical_bids[s.id()] = ceiling;
      }
      out.allocation[last_dropped->id()] = demand - offered;
      rec.action = StepAction::kStopExact;
      out.trace.push_back(std::move(rec));
      out.price = ceiling;
      return out;
    }

    if (active.size() == 1) {
      out.allocation[active.front().id()] = demand;
      out.canonical_bids[active.front().id()] = ceiling;
      rec.action = StepAction::kStopLast;
      rec.subject = active.front().id();
      out.trace.push_back(std::move(rec));
      out.price = ceiling;
      return out;
    }

    Rational total;
    for (const auto& s : active) total += effective_demand(s.capacity(), demand);

    std::vector<BidderThreshold> th;
    for (const auto& s : active) {
      const Rational own = effective_demand(s.capacity(), demand);
      const Rational rivals = total - own;
      BidderThreshold t;
      t.id = s.id();
      t.bar = s.cost() + (demand - rivals) * (ceiling - s.cost()) / own;
      t.hat = max(s.cost(), t.bar);
      t.residual_type = rivals < demand;
      th.push_back(std::move(t));
    }
    rec.thresholds = th;

    Rational highest = th.front().hat;
    for (const auto& t : th) highest = max(highest, t.hat);

    std::optional<std::size_t> residual;
    std::optional<std::size_t> drop;
    for (std::size_t i = 0; i < active.size(); ++i) {
      if (th[i].hat != highest) continue;
      const auto& cand = active[i];
      if (th[i].residual_type) {
        if (!residual) {
          residual = i;
          continue;
        }
        const auto& cur = active[*residual];
        if (cand.capacity() > cur.capacity() ||
            (cand.capacity() == cur.capacity() && cand.input_index > cur.input_index)) {
          residual = i;
        }
      } else if (!drop || cand.cost() > active[*drop].cost() ||
                 (cand.cost() == active[*drop].cost() && cand.input_index > active[*drop].input_index)) {
        drop = i;
      }
    }

    if (residual) {
      const RankedSeller& r = active[*residual];
      for (const auto& s : active) {
        out.allocation[s.id()] = s.capacity();
        out.canonical_bids[s.id()] = highest;
      }
      out.allocation[r.id()] = demand - (offered - r.capacity());
      out.canonical_bids[r.id()] = ceiling;
      out.residual = r.id();
      rec.action = StepAction::kStopResidual;
      rec.subject = r.id();
      out.trace.push_back(std::move(rec));
      out.price = ceiling;
      return out;
    }

    const RankedSeller dropped = active[*drop];
    rec.action = StepAction::kDrop;
    rec.subject = dropped.id();
    out.trace.push_back(std::move(rec));
    out.dropout_order.push_back(dropped.id());
    out.canonical_bids[dropped.id()] = dropped.cost();
    ceiling = dropped.cost();
    last_dropped = dropped;
    active.erase(active.begin() + static_cast<std::ptrdiff_t>(*drop));
  }
}

MirroredAuction mirror_to_buyer(const ProcurementMarket& market) {
  MirroredAuction m;
  m.price_cap = market.price_cap();
  m.buyer_env.supply = SupplyCurve::constant(market.demand());
  m.buyer_env.reserve = 0;
  // Input order is preserved so that ties break identically on both sides.
  std::vector<RankedSeller> by_input(market.sellers().begin(), market.sellers().end());
  std::sort(by_input.begin(), by_input.end(),
            [](const RankedSeller& a, const RankedSeller& b) { return a.input_index < b.input_index; });
  for (const auto& s : by_input) {
    if (s.cost() < market.price_cap()) {
      m.buyer_env.bidders.push_back({s.id(), market.price_cap() - s.cost(), s.capacity()});
    } else {
      m.excluded.push_back(s.id());
    }
  }
  return m;
}

Outcome MirroredAuction::back_map(const Outcome& buyer) const {
  Outcome out;
  out.price = price_cap - buyer.price;
  out.allocation = buyer.allocation;
  for (const auto& [id, bid] : buyer.canonical_bids) out.canonical_bids[id] = price_cap - bid;
  out.dropout_order = buyer.dropout_order;
  out.residual = buyer.residual;
  for (StepRecord rec : buyer.trace) {
    rec.floor_price = price_cap - rec.floor_price;
    for (auto& t : rec.thresholds) {
      t.bar = price_cap - t.bar;
      t.hat = price_cap - t.hat;
    }
    out.trace.push_back(std::move(rec));
  }
  return out;
}

Outcome solve_procurement_via_mirror(const ProcurementMarket& market) {
  const MirroredAuction mirror = mirror_to_buyer(market);
  Outcome out = mirror.back_map(solve_equilibrium(validate_env(mirror.buyer_env)));
  for (const auto& s : market.sellers()) {
    if (s.cost() >= market.price_cap()) {
      out.allocation[s.id()] = 0;
      out.canonical_bids[s.id()] = s.cost();
    }
  }
  return out;
}

}  // namespace uniprice
