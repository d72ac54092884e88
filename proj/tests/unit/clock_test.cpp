#include <gtest/gtest.h>

#include <sstream>

#include "support/instances.hpp"

namespace uniprice {
namespace {

using testing::R;

TEST(DominantThreshold, ExampleTwoSecondRound) {
  EXPECT_EQ(dominant_threshold(1, R("0.1"), 2, 3, 2), R("0.55"));
  EXPECT_EQ(dominant_threshold(R("0.5"), R("0.1"), 2, 3, 2), R("0.3"));
  EXPECT_EQ(dominant_threshold(R("0.8"), R("0.1"), 3, 3, 2), R("0.8"));
  EXPECT_EQ(dominant_threshold(R("0.8"), 0, 5, 3, 2), R("0.8"));
}

TEST(TruthfulStrategy, DropPrices) {
  const Market m = testing::example2();
  ClockState state(m, {"1", "2", "3"});
  EXPECT_EQ(truthful_strategy(m.find("3").bidder)->drop_price(state.context_for("3")), R("0.1"));
  state.apply_dropout("3", R("0.1"));
  EXPECT_EQ(truthful_strategy(m.find("2").bidder)->drop_price(state.context_for("2")), R("0.3"));

  const Market solo = testing::market(3, {{R("0.8"), 2}, {R("0.4"), 2}});
  ClockState open(solo, {"1", "2"});
  EXPECT_LT(truthful_strategy(solo.find("1").bidder)->drop_price(open.context_for("1")), R("0.8"));
}

TEST(Clock, ExampleTwoEvents) {
  const Market m = testing::example2();
  const ClockRun run = run_clock_auction(m, truthful_strategies(m));
  const std::vector<ClockEvent> expected{
      OpenEvent{0, {"1", "2", "3"}},
      DropoutEvent{"3", R("0.1")},
      ProvisionalUpdateEvent{R("0.1")},
      DropoutEvent{"2", R("0.3")},
      FinishEvent{R("0.1"), testing::alloc({2, 1, 0}), FinishCase::kResidual},
  };
  EXPECT_EQ(run.events, expected);
  EXPECT_EQ(run.outcome.residual, BidderId("2"));
}

TEST(Clock, ExampleOneEvents) {
  const Market m = testing::example1();
  const ClockRun run = run_clock_auction(m, truthful_strategies(m));
  const std::vector<ClockEvent> expected{
      OpenEvent{0, {"1", "2", "3"}},
      DropoutEvent{"3", R("0.3")},
      ProvisionalUpdateEvent{R("0.3")},
      DropoutEvent{"2", R("0.5")},
      ProvisionalUpdateEvent{R("0.5")},
      FinishEvent{R("0.5"), testing::alloc({3, 0, 0}), FinishCase::kLast},
  };
  EXPECT_EQ(run.events, expected);
}

TEST(Clock, SingleBidderFinishesAtReserve) {
  const Market m = testing::market(3, {{1, 5}}, R("0.25"));
  const ClockRun run = run_clock_auction(m, truthful_strategies(m));
  ASSERT_TRUE(std::holds_alternative<FinishEvent>(run.events.back()));
  EXPECT_EQ(std::get<FinishEvent>(run.events.back()).price, R("0.25"));
  EXPECT_EQ(run.outcome.allocation, testing::alloc({3}));
}

TEST(Clock, SimultaneousDropsAtZero) {
  const Market m = testing::market(3, {{1, 2}, {1, 2}, {1, 2}});
  StrategyMap s;
  for (const auto& b : m.bidders()) s[b.id()] = fixed_drop_strategy(0);
  const ClockRun run = run_clock_auction(m, s);
  ASSERT_GE(run.events.size(), 3u);
  const auto& first = std::get<DropoutEvent>(run.events[1]);
  EXPECT_EQ(first.price, 0);
  EXPECT_EQ(std::get<FinishEvent>(run.events.back()).price, 0);
  EXPECT_EQ(total_units(run.outcome.allocation), 3);
}

TEST(Clock, MissingStrategy) {
  const Market m = testing::example2();
  StrategyMap s = truthful_strategies(m);
  s.erase("2");
  try {
    (void)run_clock_auction(m, s);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMissingStrategy);
  }
}

TEST(Clock, NonMonotoneStrategyIsRejected) {
  const Market m = testing::example2();
  StrategyMap s = truthful_strategies(m);
  std::vector<Rational> grid;
  for (int k = 0; k <= 10; ++k) grid.emplace_back(Rational(k, 10));
  s["1"] = decision_strategy(
      [](const ClockContext& ctx) {
        return ctx.current_price == R("0.2") ? ClockAction::kDrop : ClockAction::kRemain;
      },
      grid);
  try {
    (void)run_clock_auction(m, s);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNonMonotoneStrategy);
  }
}

TEST(Clock, DecisionStrategyMatchesFixedDrop) {
  const Market m = testing::example2();
  std::vector<Rational> grid;
  for (int k = 0; k <= 20; ++k) grid.emplace_back(Rational(k, 20));
  StrategyMap a = truthful_strategies(m);
  StrategyMap b = truthful_strategies(m);
  a["2"] = fixed_drop_strategy(R("0.6"));
  b["2"] = decision_strategy(
      [](const ClockContext& ctx) { return ctx.current_price < R("0.6") ? ClockAction::kRemain : ClockAction::kDrop; },
      grid);
  EXPECT_EQ(run_clock_auction(m, a).events, run_clock_auction(m, b).events);
}

TEST(Clock, ReplayRejectsTamperedLog) {
  const Market m = testing::example2();
  std::vector<ClockEvent> events = run_clock_auction(m, truthful_strategies(m)).events;
  std::get<ProvisionalUpdateEvent>(events[2]).price = R("0.2");
  try {
    (void)replay_events(m, events);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidEventLog);
  }
  events.pop_back();
  EXPECT_THROW((void)replay_events(m, std::span<const ClockEvent>(events.data(), 2)), Error);
}

class ClockProperties : public ::testing::Test {
 protected:
  void SetUp() override {
    testing::Rng rng(11);
    for (int i = 0; i < 400; ++i) envs_.push_back(testing::random_auction(rng));
  }
  std::vector<AuctionEnv> envs_;
};

TEST_F(ClockProperties, MatchesSolver) {
  for (const auto& env : envs_) {
    const Market m = validate_env(env);
    const Outcome solved = solve_equilibrium(m);
    const ClockRun run = run_clock_auction(m, truthful_strategies(m));
    ASSERT_EQ(run.outcome.price, solved.price);
    ASSERT_EQ(run.outcome.allocation, solved.allocation);
  }
}

TEST_F(ClockProperties, ProvisionalPriceAndReplay) {
  for (const auto& env : envs_) {
    const Market m = validate_env(env);
    const ClockRun run = run_clock_auction(m, truthful_strategies(m));
    Rational p = m.reserve();
    Rational last_price = m.reserve();
    for (const auto& e : run.events) {
      if (const auto* u = std::get_if<ProvisionalUpdateEvent>(&e)) {
        ASSERT_GE(u->price, p);
        p = u->price;
      }
      if (const auto* d = std::get_if<DropoutEvent>(&e)) {
        ASSERT_GE(d->price, last_price);
        last_price = d->price;
      }
    }
    ASSERT_EQ(std::get<FinishEvent>(run.events.back()).price, p);

    const Outcome replayed = replay_events(m, run.events);
    ASSERT_EQ(replayed.price, run.outcome.price);
    ASSERT_EQ(replayed.allocation, run.outcome.allocation);
    ASSERT_EQ(replayed.dropout_order, run.outcome.dropout_order);
    ASSERT_EQ(replayed.canonical_bids, run.outcome.canonical_bids);
  }
}

std::string describe(const Market& m) {
  std::ostringstream os;
  os << "m=" << m.supply().at(0) << " r=" << m.reserve();
  for (const auto& b : m.bidders()) os << " (" << b.id() << ": v=" << b.value() << " q=" << b.quantity() << ")";
  return os.str();
}

Rational clock_payoff(const Market& m, const Outcome& o, const BidderId& id) {
  return o.allocation.at(id) * (m.find(id).value() - o.price);
}

Outcome with_fixed_drop(const Market& m, const BidderId& id, const Rational& drop) {
  StrategyMap s = truthful_strategies(m);
  s[id] = fixed_drop_strategy(drop);
  return run_clock_auction(m, s).outcome;
}

// Staying in past the truthful exit makes the top bidder concede first.
TEST(ClockDeviation, LateExitBeatsTruthful) {
  const Market m = testing::market(2, {{R("0.35"), 1}, {R("0.65"), 2}, {R("0.3"), 3}});
  const Outcome base = run_clock_auction(m, truthful_strategies(m)).outcome;
  EXPECT_EQ(clock_payoff(m, base, "1"), 0);
  const Outcome alt = with_fixed_drop(m, "1", R("0.5"));
  EXPECT_EQ(alt.price, R("0.3"));
  EXPECT_EQ(clock_payoff(m, alt, "1"), R("0.05"));
}

// Leaving at zero takes the residual before the provisional price rises.
TEST(ClockDeviation, EarlyExitBeatsTruthful) {
  const Market m = testing::market(4, {{R("0.9"), 1}, {R("0.75"), 4}, {R("0.3"), 1}});
  const Outcome base = run_clock_auction(m, truthful_strategies(m)).outcome;
  EXPECT_EQ(base.price, R("0.3"));
  EXPECT_EQ(clock_payoff(m, base, "2"), R("1.35"));
  const Outcome alt = with_fixed_drop(m, "2", 0);
  EXPECT_EQ(alt.price, 0);
  EXPECT_EQ(clock_payoff(m, alt, "2"), R("1.5"));
}

}  // namespace
}  // namespace uniprice
