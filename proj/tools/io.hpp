#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <variant>

#include <json.hpp>

#include "uniprice/uniprice.hpp"

namespace uniprice::cli {

using Json = nlohmann::ordered_json;

struct Instance {
  std::variant<AuctionEnv, ProcurementEnv> env;
  std::optional<GridConfig> grid;
  std::optional<BidProfile> profile;
};

/// Numbers are JSON integers or strings ("0.75", "3/4"). Floats throw kParse.
Rational parse_number(const Json& j, const std::string& where);

/// Throws kParse on malformed documents; validation happens later.
Instance parse_instance(const Json& doc);
Instance load_instance(const std::string& path);
Json load_json(const std::string& path);

Json to_json(const Outcome& outcome, bool with_trace);
Json to_json(const ClockEvent& event);
Json to_json(const BidProfile& profile);

/// Field-by-field comparison against an expected-result document. Returns
/// a description of the first difference.
std::optional<std::string> compare_outcome(const Json& expected, const Json& actual);

void print_outcome(std::ostream& os, const Outcome& outcome, bool with_trace);

}  // namespace uniprice::cli
