#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>

#include "io.hpp"

namespace uniprice::cli {

namespace {

struct Options {
  std::string instance;
  bool trace = false;
  bool json = false;
  std::string expect;
  std::string events;
  std::string epsilon;
  std::string max_bid;
  std::uint64_t budget = 5'000'000;
  std::size_t max_rounds = 100;
  std::string trajectory;
};

class EquivalenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

const AuctionEnv& auction_env(const Instance& inst, const char* command) {
  if (const auto* env = std::get_if<AuctionEnv>(&inst.env)) return *env;
  throw Error(ErrorCode::kUnsupportedSupply, std::string(command) + " needs an auction instance");
}

GridConfig grid_from(const Options& opt, const Instance& inst, const Market& market) {
  std::optional<GridConfig> grid = inst.grid;
  if (!opt.epsilon.empty()) {
    grid = GridConfig{Rational::parse(opt.epsilon), grid ? grid->max_bid : Rational(0)};
    if (grid->max_bid.sign() == 0) grid->max_bid = grid->epsilon * Rational(ceil_integer(market.max_value() / grid->epsilon), 1);
  }
  if (!opt.max_bid.empty()) {
    if (!grid) throw Error(ErrorCode::kInvalidGrid, "--max-bid needs --epsilon or a grid block");
    grid->max_bid = Rational::parse(opt.max_bid);
  }
  if (!grid) throw Error(ErrorCode::kInvalidGrid, "no grid: pass --epsilon or add a grid block to the instance");
  grid->validate();
  return *grid;
}

int cmd_solve(const Options& opt, std::ostream& out, std::ostream& err) {
  const Instance inst = load_instance(opt.instance);
  Outcome outcome;
  if (const auto* env = std::get_if<AuctionEnv>(&inst.env)) {
    outcome = solve(validate_env(*env));
  } else {
    outcome = solve_procurement(validate_procurement(std::get<ProcurementEnv>(inst.env)));
  }
  const Json doc = to_json(outcome, true);
  if (opt.json) {
    out << (opt.trace ? doc : to_json(outcome, false)).dump(2) << '\n';
  } else {
    print_outcome(out, outcome, opt.trace);
  }
  if (!opt.expect.empty()) {
    if (const auto diff = compare_outcome(load_json(opt.expect), doc)) {
      err << "mismatch against " << opt.expect << ": " << *diff << '\n';
      return kEquivalenceFailure;
    }
    if (!opt.json) out << "matches " << opt.expect << '\n';
  }
  return kOk;
}

int cmd_clock(const Options& opt, std::ostream& out, std::ostream& err) {
  const Instance inst = load_instance(opt.instance);
  const Market market = validate_env(auction_env(inst, "clock"));
  const ClockRun run = run_clock_auction(market, truthful_strategies(market));
  const Outcome solved = solve(market);

  if (!opt.events.empty()) {
    std::ofstream log(opt.events);
    if (!log) throw Error(ErrorCode::kParse, "cannot write " + opt.events);
    for (const auto& e : run.events) log << to_json(e).dump() << '\n';
  }
  const bool equivalent = run.outcome.price == solved.price && run.outcome.allocation == solved.allocation;

  if (opt.json) {
    Json doc = to_json(run.outcome, false);
    doc["events"] = Json::array();
    for (const auto& e : run.events) doc["events"].push_back(to_json(e));
    doc["matches_solver"] = equivalent;
    out << doc.dump(2) << '\n';
  } else {
    for (const auto& e : run.events) out << to_json(e).dump() << '\n';
    print_outcome(out, run.outcome, false);
  }
  if (!equivalent) {
    err << "clock outcome (price " << run.outcome.price << ") differs from the solver (price " << solved.price
        << ")\n";
    return kEquivalenceFailure;
  }
  if (!opt.json) out << "matches solver: yes\n";
  return kOk;
}

int cmd_verify(const Options& opt, std::ostream& out, std::ostream&) {
  const Instance inst = load_instance(opt.instance);
  const Market market = validate_env(auction_env(inst, "verify"));
  const GridConfig grid = grid_from(opt, inst, market);
  const BidProfile profile = inst.profile ? *inst.profile : grid_profile(solve(market), grid);
  out << "profile:";
  for (const auto& [id, bid] : profile) out << ' ' << id << '=' << bid;
  out << '\n';
  const NashVerdict verdict = verify_epsilon_nash(market, profile, grid);
  if (std::holds_alternative<Verified>(verdict)) {
    out << "Verified\n";
  } else {
    const Deviation& d = std::get<Deviation>(verdict);
    out << "Deviation: bidder " << d.bidder << " bids " << d.bid << " and gains " << d.gain << '\n';
  }
  return kOk;
}

int cmd_enumerate(const Options& opt, std::ostream& out, std::ostream&) {
  const Instance inst = load_instance(opt.instance);
  const Market market = validate_env(auction_env(inst, "enumerate"));
  const GridConfig grid = grid_from(opt, inst, market);
  const auto classes = enumerate_equilibria_on_grid(market, grid, opt.budget);
  out << classes.size() << " equilibrium outcome(s)\n";
  for (const auto& c : classes) {
    out << "price " << (c.price ? c.price->str() : std::string("none")) << ", allocation";
    for (const auto& [id, units] : c.allocation) out << ' ' << id << '=' << units;
    out << ", " << c.profiles.size() << " profile(s)\n";
  }
  return kOk;
}

int cmd_dynamics(const Options& opt, std::ostream& out, std::ostream&) {
  const Instance inst = load_instance(opt.instance);
  const Market market = validate_env(auction_env(inst, "dynamics"));
  Rational epsilon;
  if (!opt.epsilon.empty()) {
    epsilon = Rational::parse(opt.epsilon);
  } else if (inst.grid) {
    epsilon = inst.grid->epsilon;
  } else {
    throw Error(ErrorCode::kInvalidGrid, "no grid: pass --epsilon or add a grid block to the instance");
  }
  const DynamicsResult r =
      best_response_dynamics(market, {epsilon, opt.max_rounds, inst.profile.value_or(BidProfile{})});

  if (!opt.trajectory.empty()) {
    std::ofstream file(opt.trajectory);
    if (!file) throw Error(ErrorCode::kParse, "cannot write " + opt.trajectory);
    for (std::size_t k = 0; k < r.trajectory.size(); ++k) {
      file << Json{{"move", k}, {"mover", r.movers[k]}, {"profile", to_json(r.trajectory[k])}}.dump() << '\n';
    }
  } else {
    for (std::size_t k = 0; k < r.trajectory.size(); ++k) {
      out << k << ' ' << r.movers[k] << ':';
      for (const auto& [id, bid] : r.trajectory[k]) out << ' ' << id << '=' << bid;
      out << '\n';
    }
  }
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Cycle>) {
          out << "verdict: Cycle (period " << v.period << ", start " << v.start << ")\n";
        } else if constexpr (std::is_same_v<T, Converged>) {
          out << "verdict: Converged\n";
        } else {
          out << "verdict: Budget\n";
        }
      },
      r.verdict);
  return kOk;
}

int exit_code_for(const Error& e) {
  if (e.code() == ErrorCode::kParse) return kParseFailure;
  if (e.code() == ErrorCode::kBudgetExceeded) return kBudgetFailure;
  return kValidationFailure;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Equilibria of uniform-price auctions with quantity-constrained bidders", "uniprice"};
  app.require_subcommand(1);
  Options opt;

  auto* solve_cmd = app.add_subcommand("solve", "Equilibrium price, allocation and bids");
  solve_cmd->add_option("instance", opt.instance, "Instance file")->required();
  solve_cmd->add_flag("--trace", opt.trace, "Include per-step thresholds");
  solve_cmd->add_flag("--json", opt.json, "Emit a JSON document");
  solve_cmd->add_option("--expect", opt.expect, "Compare against an expected-result JSON file");

  auto* clock_cmd = app.add_subcommand("clock", "Ascending clock auction with truthful bidders");
  clock_cmd->add_option("instance", opt.instance, "Instance file")->required();
  clock_cmd->add_option("--events", opt.events, "Write the event log as JSON lines");
  clock_cmd->add_flag("--json", opt.json, "Emit a JSON document");

  auto* verify_cmd = app.add_subcommand("verify", "Check a bid profile for profitable grid deviations");
  auto* enumerate_cmd = app.add_subcommand("enumerate", "All pure equilibria on the bid grid");
  for (auto* cmd : {verify_cmd, enumerate_cmd}) {
    cmd->add_option("instance", opt.instance, "Instance file")->required();
    cmd->add_option("--epsilon", opt.epsilon, "Grid step");
    cmd->add_option("--max-bid", opt.max_bid, "Largest grid bid");
  }
  enumerate_cmd->add_option("--budget", opt.budget, "Maximum number of profiles");

  auto* dynamics_cmd = app.add_subcommand("dynamics", "Pay-as-bid best-response dynamics");
  dynamics_cmd->add_option("instance", opt.instance, "Instance file")->required();
  dynamics_cmd->add_option("--epsilon", opt.epsilon, "Grid step");
  dynamics_cmd->add_option("--max-rounds", opt.max_rounds, "Round limit");
  dynamics_cmd->add_option("--trajectory", opt.trajectory, "Write the trajectory as JSON lines");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(std::move(reversed));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kParseFailure;
  }

  try {
    if (solve_cmd->parsed()) return cmd_solve(opt, out, err);
    if (clock_cmd->parsed()) return cmd_clock(opt, out, err);
    if (verify_cmd->parsed()) return cmd_verify(opt, out, err);
    if (enumerate_cmd->parsed()) return cmd_enumerate(opt, out, err);
    return cmd_dynamics(opt, out, err);
  } catch (const Error& e) {
    err << "error [" << to_string(e.code()) << "]: " << e.what() << '\n';
    return exit_code_for(e);
  } catch (const Json::exception& e) {
    err << "error [parse]: " << e.what() << '\n';
    return kParseFailure;
  }
}

}  // namespace uniprice::cli
