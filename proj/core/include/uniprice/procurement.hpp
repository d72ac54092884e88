#pragma once

#include <span>
#include <vector>

#include "uniprice/model.hpp"

namespace uniprice {

/// Constant marginal cost up to a capacity.
struct Seller {
  BidderId id;
  Rational cost;
  Rational capacity;
};

struct ProcurementEnv {
  std::vector<Seller> sellers;
  Rational demand;
  Rational price_cap;
};

struct RankedSeller {
  Seller seller;
  std::size_t input_index = 0;

  const BidderId& id() const { return seller.id; }
  const Rational& cost() const { return seller.cost; }
  const Rational& capacity() const { return seller.capacity; }
};

/// Validated procurement auction. Sellers are ranked by cost, cheapest
/// first, equal costs in input order. Sellers whose cost reaches the price
/// cap cannot make an admissible offer and never sell.
class ProcurementMarket {
 public:
  std::span<const RankedSeller> sellers() const { return sellers_; }
  const Rational& demand() const { return demand_; }
  const Rational& price_cap() const { return price_cap_; }

  std::vector<RankedSeller> participants() const;

 private:
  friend ProcurementMarket validate_procurement(const ProcurementEnv& env);

  std::vector<RankedSeller> sellers_;
  Rational demand_;
  Rational price_cap_;
};

/// Throws kCapBelowCost when no seller's cost is below the cap.
ProcurementMarket validate_procurement(const ProcurementEnv& env);

/// Uniform-price procurement equilibrium, priced at the last accepted
/// offer. Computed directly on the seller side: ceilings start at the cap and
/// fall to the cost of each seller that leaves. When capacity cannot cover
/// demand, every seller sells its capacity at the cap.
Outcome solve_procurement(const ProcurementMarket& market);

/// The buyer-side auction with values cap - cost, supply = demand and no
/// reserve, plus the map back to seller terms.
struct MirroredAuction {
  AuctionEnv buyer_env;
  Rational price_cap;
  std::vector<BidderId> excluded;  // sellers at or above the cap

  /// Prices, offers and thresholds become cap - x; quantities carry over.
  Outcome back_map(const Outcome& buyer_outcome) const;
};

MirroredAuction mirror_to_buyer(const ProcurementMarket& market);

/// solve_equilibrium on the mirrored auction, mapped back.
Outcome solve_procurement_via_mirror(const ProcurementMarket& market);

}  // namespace uniprice
