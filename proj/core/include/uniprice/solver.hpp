#pragma once

#include <span>
#include <vector>

#include "uniprice/model.hpp"

namespace uniprice {

struct Threshold {
  Rational bar;
  Rational hat;
  bool residual_type = false;
};

/// Indifference thresholds of one round of the procedure.
///
/// A bidder compares winning its full effective demand at price b against
/// conceding and taking the residual `supply - sum of rivals' demand` at
/// `floor_price`. `bar` is the largest b at which winning is still weakly
/// better; `hat = min(value, bar)`. A bidder is residual-type when its rivals
/// alone cannot cover the supply, which is exactly when `hat == bar < value`
/// (or, degenerately, when `value == floor_price`).
///
/// Throws kInsufficientCompetition unless the active bidders' effective
/// demand strictly exceeds `supply`.
std::vector<Threshold> step_thresholds(std::span<const Bidder> active, const Rational& supply,
                                       const Rational& floor_price);

/// Solves min(q, m(b)) * (value - b) = residual_payoff for b one supply
/// segment at a time and keeps the largest root lying inside the segment it
/// was computed for. With no consistent root, returns the supremum of the
/// prices at which winning is weakly preferred, which is a breakpoint.
Rational indifference_price(const Rational& value, const Rational& quantity, const Rational& residual_payoff,
                            const SupplyCurve& curve);

/// Equilibrium outcome for a constant supply, including a reserve price.
/// Throws kUnsupportedSupply for step curves.
Outcome solve_equilibrium(const Market& market);

/// Same procedure with a price-dependent supply m(b). Exact and trivial
/// tests are evaluated at m(floor); the indifference threshold, whose
/// denominator min(q, m(b)) depends on the unknown b, is solved segment by
/// segment and the largest consistent root is kept.
Outcome solve_increasing_supply(const Market& market);

/// Dispatches on the supply curve.
Outcome solve(const Market& market);

}  // namespace uniprice
