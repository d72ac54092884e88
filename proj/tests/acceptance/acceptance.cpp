// Acceptance gate. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails. All comparisons are exact.

#include <chrono>
#include <functional>
#include <iostream>
#include <sstream>

#include "support/instances.hpp"

namespace uniprice {
namespace {

using testing::R;
using Clock = std::chrono::steady_clock;

constexpr double kExampleLimitMs = 1.0;
constexpr double kClockSuiteLimitS = 10.0;
constexpr double kOracleSuiteLimitS = 60.0;
constexpr int kClockCorpus = 1000;
constexpr int kOracleCorpus = 200;
constexpr int kMirrorCorpus = 500;
constexpr int kTwoBidderCorpus = 500;

struct Result {
  bool pass = true;
  std::string detail;
};

class Check {
 public:
  void expect(bool ok, const std::string& what) {
    if (!ok && result_.pass) {
      result_.pass = false;
      result_.detail = what;
    }
  }
  bool ok() const { return result_.pass; }
  Result done(const std::string& summary) {
    if (result_.pass) result_.detail = summary;
    return result_;
  }

 private:
  Result result_;
};

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

template <class T>
std::string show(const T& x) {
  std::ostringstream os;
  os << x;
  return os.str();
}

std::vector<Rational> bars(const StepRecord& rec) {
  std::vector<Rational> out;
  for (const auto& t : rec.thresholds) out.push_back(t.bar);
  return out;
}

// Fastest of a few runs, so a cold cache does not decide the verdict.
double best_time_ms(const std::function<void()>& fn) {
  double best = 1e9;
  for (int i = 0; i < 5; ++i) {
    const auto t0 = Clock::now();
    fn();
    best = std::min(best, elapsed_ms(t0));
  }
  return best;
}

Result example_one() {
  Check c;
  const Market m = testing::example1();
  Outcome o;
  const double ms = best_time_ms([&] { o = solve_equilibrium(m); });
  c.expect(o.price == Rational(1, 2), "price " + o.price.str());
  c.expect(o.allocation == testing::alloc({3, 0, 0}), "allocation");
  c.expect(o.trace.size() >= 2, "trace too short");
  if (c.ok()) {
    c.expect(bars(o.trace[0]) == std::vector<Rational>{Rational(7, 6), Rational(5, 4), Rational(1, 2)},
             "step-1 thresholds");
    c.expect(bars(o.trace[1]) == std::vector<Rational>{Rational(17, 30), Rational(1, 2)}, "step-2 thresholds");
  }
  c.expect(ms < kExampleLimitMs, "took " + show(ms) + " ms");
  return c.done("price 1/2, allocation (3,0,0), thresholds exact, " + show(ms) + " ms");
}

Result example_two() {
  Check c;
  const Market m = testing::example2();
  Outcome o;
  const double ms = best_time_ms([&] { o = solve_equilibrium(m); });
  c.expect(o.price == Rational(1, 10), "price " + o.price.str());
  c.expect(o.allocation == testing::alloc({2, 1, 0}), "allocation");
  c.expect(o.trace.size() == 2, "trace length");
  if (c.ok()) c.expect(bars(o.trace[1]) == std::vector<Rational>{Rational(11, 20), Rational(3, 10)}, "step-2 thresholds");
  c.expect(ms < kExampleLimitMs, "took " + show(ms) + " ms");
  return c.done("price 1/10, allocation (2,1,0), step-2 thresholds (11/20, 3/10), " + show(ms) + " ms");
}

std::vector<AuctionEnv> clock_corpus() {
  testing::Rng rng(2024);
  std::vector<AuctionEnv> out;
  for (int i = 0; i < kClockCorpus; ++i) out.push_back(testing::random_auction(rng));
  return out;
}

Result clock_equivalence(const std::vector<AuctionEnv>& corpus) {
  Check c;
  const auto t0 = Clock::now();
  for (std::size_t i = 0; i < corpus.size() && c.ok(); ++i) {
    const Market m = validate_env(corpus[i]);
    const Outcome solved = solve_equilibrium(m);
    const ClockRun run = run_clock_auction(m, truthful_strategies(m));
    c.expect(run.outcome.price == solved.price && run.outcome.allocation == solved.allocation,
             "instance " + std::to_string(i) + " differs");
  }
  const double s = elapsed_ms(t0) / 1000;
  c.expect(s < kClockSuiteLimitS, "took " + show(s) + " s");
  return c.done(std::to_string(corpus.size()) + " instances agree, " + show(s) + " s");
}

Result oracle_verification() {
  Check c;
  testing::Rng rng(77);
  const GridConfig grid_step{Rational(1, 20), 1};
  const auto t0 = Clock::now();
  for (int i = 0; i < kOracleCorpus && c.ok(); ++i) {
    const Market m = validate_env(testing::random_small_auction(rng));
    const GridConfig grid{grid_step.epsilon, m.max_value()};
    const Outcome o = solve_equilibrium(m);
    const NashVerdict v = verify_epsilon_nash(m, grid_profile(o, grid), grid);
    if (const auto* d = std::get_if<Deviation>(&v)) {
      c.expect(false, "instance " + std::to_string(i) + ": bidder " + d->bidder + " gains " + d->gain.str());
    }
  }
  const double s = elapsed_ms(t0) / 1000;
  c.expect(s < kOracleSuiteLimitS, "took " + show(s) + " s");
  return c.done(std::to_string(kOracleCorpus) + " canonical profiles verified, " + show(s) + " s");
}

Result nonuniqueness() {
  Check c;
  const auto classes = enumerate_equilibria_on_grid(testing::example2(), {Rational(1, 20), 1});
  auto has = [&](const Allocation& a) {
    for (const auto& k : classes) {
      if (k.price == Rational(1, 10) && k.allocation == a) return true;
    }
    return false;
  };
  c.expect(has(testing::alloc({2, 1, 0})), "missing (2,1,0) at 1/10");
  c.expect(has(testing::alloc({1, 2, 0})), "missing (1,2,0) at 1/10");
  return c.done("both price-1/10 outcomes among " + std::to_string(classes.size()) + " classes");
}

Result threshold_properties(const std::vector<AuctionEnv>& corpus) {
  Check c;
  std::size_t steps = 0;
  for (std::size_t i = 0; i < corpus.size() && c.ok(); ++i) {
    const Market m = validate_env(corpus[i]);
    const Outcome o = solve_equilibrium(m);
    for (const auto& rec : o.trace) {
      if (rec.thresholds.empty()) continue;
      ++steps;
      Rational total;
      for (const auto& id : rec.remaining) total += effective_demand(m.find(id).quantity(), rec.supply);
      for (const auto& t : rec.thresholds) {
        const RankedBidder& b = m.find(t.id);
        const Rational rivals = total - effective_demand(b.quantity(), rec.supply);
        // A bidder whose value equals the floor gains nothing either way.
        if (b.value() > rec.floor_price) {
          c.expect((t.hat == b.value()) == (rivals >= rec.supply),
                   "value-threshold rule fails, instance " + std::to_string(i) + " bidder " + t.id);
        }
        if (rec.remaining.size() >= 2) {
          c.expect(t.hat >= rec.floor_price, "threshold below floor, instance " + std::to_string(i) + " bidder " + t.id);
        }
      }
    }
  }
  return c.done("value-threshold rule and floor bound hold on " + std::to_string(steps) + " threshold steps");
}

Result procurement_mirror() {
  Check c;
  const Outcome ex = solve_procurement(
      validate_procurement(testing::procurement(3, R("1.2"), {{R("0.2"), 2}, {R("0.7"), 2}, {R("1.1"), 1}})));
  c.expect(ex.price == Rational(11, 10), "example price " + ex.price.str());
  c.expect(ex.allocation == testing::alloc({2, 1, 0}), "example sales");
  testing::Rng rng(31);
  for (int i = 0; i < kMirrorCorpus && c.ok(); ++i) {
    const ProcurementMarket m = validate_procurement(testing::random_procurement(rng));
    const Outcome direct = solve_procurement(m);
    const Outcome mirrored = solve_procurement_via_mirror(m);
    c.expect(direct.price == mirrored.price && direct.allocation == mirrored.allocation,
             "instance " + std::to_string(i) + " differs");
  }
  return c.done("example price 11/10 sales (2,1,0); " + std::to_string(kMirrorCorpus) + " instances agree");
}

Result two_bidder() {
  Check c;
  testing::Rng rng(41);
  for (int i = 0; i < kTwoBidderCorpus && c.ok(); ++i) {
    const Market m = testing::market(testing::uniform(rng, 1, 8),
                                     {{testing::random_rational(rng, 2, 20), testing::uniform(rng, 1, 10)},
                                      {testing::random_rational(rng, 2, 20), testing::uniform(rng, 1, 10)}});
    const Outcome a = two_bidder_equilibrium(m);
    const Outcome b = solve_equilibrium(m);
    c.expect(a.price == b.price && a.allocation == b.allocation, "instance " + std::to_string(i) + " differs");
  }
  // Symmetric bidders with q < m < 2q.
  for (int q = 2; q <= 6 && c.ok(); ++q) {
    for (int m = q + 1; m < 2 * q && c.ok(); ++m) {
      const Rational v(7, 10);
      const Market mk = testing::market(m, {{v, q}, {v, q}});
      const BidProfile expected = testing::bids({Rational(2 * q - m) * v / q, 0});
      c.expect(solve_equilibrium(mk).canonical_bids == expected, "solver symmetric bids, q=" + std::to_string(q));
      c.expect(two_bidder_equilibrium(mk).canonical_bids == expected, "closed-form symmetric bids");
    }
  }
  return c.done(std::to_string(kTwoBidderCorpus) + " instances agree; symmetric bids ((2q-m)v/q, 0)");
}

Result reserve_monotonicity() {
  Check c;
  const Outcome at_tenth = solve_equilibrium(testing::market(3, {{1, 2}, {R("0.5"), 2}}, R("0.1")));
  const Outcome at_fifth = solve_equilibrium(testing::market(3, {{1, 2}, {R("0.5"), 2}}, R("0.2")));
  c.expect(at_tenth.revenue() == Rational(3, 10), "revenue at r=1/10 is " + at_tenth.revenue().str());
  c.expect(at_fifth.revenue() == Rational(3, 5), "revenue at r=1/5 is " + at_fifth.revenue().str());

  testing::Rng rng(53);
  int used = 0;
  for (int trial = 0; trial < 5000 && used < 300 && c.ok(); ++trial) {
    AuctionEnv env = testing::random_auction(rng);
    env.reserve = 0;
    const Outcome base = solve_equilibrium(validate_env(env));
    if (base.trace.size() != 1 || base.trace[0].action != StepAction::kStopResidual) continue;
    ++used;
    Rational lowest = env.bidders.front().value;
    for (const auto& b : env.bidders) lowest = min(lowest, b.value);
    Rational prev = base.revenue();
    for (const Rational& frac : {Rational(1, 4), Rational(1, 2), Rational(1)}) {
      env.reserve = lowest * frac;
      const Rational rev = solve_equilibrium(validate_env(env)).revenue();
      c.expect(rev >= prev, "revenue falls at r=" + env.reserve.str() + " on trial " + std::to_string(trial));
      prev = rev;
    }
  }
  c.expect(used >= 100, "only " + std::to_string(used) + " step-1 residual instances");
  return c.done("revenue 3/10 -> 3/5; nondecreasing on " + std::to_string(used) + " residual-stop instances");
}

Result edgeworth_cycle() {
  Check c;
  const Market m = testing::market(2, {{7, 2}, {5, 1}});
  const Rational eps(1, 2);
  const DynamicsResult r = best_response_dynamics(m, {eps, 200, testing::bids({0, 0})});
  const auto* cycle = std::get_if<Cycle>(&r.verdict);
  c.expect(cycle != nullptr, "no cycle detected");
  if (!cycle) return c.done("");
  bool reset = false;
  Rational peak;
  for (std::size_t k = cycle->start; k <= cycle->start + cycle->period; ++k) {
    const Rational& b1 = r.trajectory[k].at("1");
    c.expect(b1 <= R("3.5") + eps, "bidder 1 bids " + b1.str());
    peak = max(peak, b1);
    if (k > cycle->start && b1 == 0 && r.trajectory[k - 1].at("1") > 0) reset = true;
  }
  c.expect(reset, "no reset to 0 inside the cycle");
  return c.done("cycle of period " + std::to_string(cycle->period) + ", bidder 1 peaks at " + peak.str() +
                " then resets to 0");
}

}  // namespace
}  // namespace uniprice

int main() {
  using namespace uniprice;
  const auto corpus = clock_corpus();
  const std::vector<std::pair<std::string, std::function<Result()>>> criteria{
      {"Example 1 reproduction", example_one},
      {"Example 2 reproduction", example_two},
      {"clock-solver equivalence", [&] { return clock_equivalence(corpus); }},
      {"oracle epsilon-Nash verification", oracle_verification},
      {"nonuniqueness recovery", nonuniqueness},
      {"threshold properties", [&] { return threshold_properties(corpus); }},
      {"procurement mirror", procurement_mirror},
      {"two-bidder closed form", two_bidder},
      {"reserve monotonicity", reserve_monotonicity},
      {"Edgeworth cycle", edgeworth_cycle},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Result r;
    try {
      r = criteria[i].second();
    } catch (const std::exception& e) {
      r = {false, std::string("exception: ") + e.what()};
    }
    if (!r.pass) ++failed;
    std::cout << "criterion " << (i + 1) << ": " << (r.pass ? "PASS" : "FAIL") << "  " << criteria[i].first
              << " -- " << r.detail << '\n';
  }
  return failed == 0 ? 0 : 1;
}
