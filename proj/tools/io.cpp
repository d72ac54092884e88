#include "io.hpp"

#include <fstream>
#include <ostream>

namespace uniprice::cli {

namespace {

[[noreturn]] void fail(const std::string& message) { throw Error(ErrorCode::kParse, message); }

const Json& field(const Json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) fail(where + ": missing \"" + key + "\"");
  return obj.at(key);
}

std::string string_field(const Json& obj, const char* key, const std::string& where) {
  const Json& j = field(obj, key, where);
  if (!j.is_string()) fail(where + "." + key + ": expected a string");
  return j.get<std::string>();
}

SupplyCurve parse_supply(const Json& j) {
  if (j.is_object() && j.contains("steps")) {
    const Json& steps = j.at("steps");
    if (!steps.is_array()) fail("supply.steps: expected an array");
    std::vector<SupplyStep> out;
    for (std::size_t i = 0; i < steps.size(); ++i) {
      const Json& s = steps[i];
      const std::string where = "supply.steps[" + std::to_string(i) + "]";
      if (!s.is_array() || s.size() != 2) fail(where + ": expected [price, quantity]");
      out.push_back({parse_number(s[0], where), parse_number(s[1], where)});
    }
    return SupplyCurve::steps(std::move(out));
  }
  if (j.is_object() && j.contains("constant")) return SupplyCurve::constant(parse_number(j.at("constant"), "supply"));
  return SupplyCurve::constant(parse_number(j, "supply"));
}

BidProfile parse_profile(const Json& j) {
  if (!j.is_object()) fail("profile: expected an object of bids");
  BidProfile out;
  for (const auto& [id, bid] : j.items()) out[id] = parse_number(bid, "profile." + id);
  return out;
}

Json id_map(const std::map<BidderId, Rational>& m) {
  Json out = Json::object();
  for (const auto& [id, x] : m) out[id] = x.str();
  return out;
}

}  // namespace

Rational parse_number(const Json& j, const std::string& where) {
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  if (j.is_string()) {
    try {
      return Rational::parse(j.get<std::string>());
    } catch (const Error&) {
      fail(where + ": \"" + j.get<std::string>() + "\" is not an exact number");
    }
  }
  if (j.is_number_float()) fail(where + ": floating-point literals are not exact; quote the number");
  fail(where + ": expected a number");
}

Instance parse_instance(const Json& doc) {
  if (!doc.is_object()) fail("instance: expected an object");
  const std::string kind = doc.contains("kind") ? string_field(doc, "kind", "instance") : "auction";
  Instance inst;
  if (kind == "auction") {
    AuctionEnv env;
    env.supply = parse_supply(field(doc, "supply", "instance"));
    env.reserve = doc.contains("reserve") ? parse_number(doc.at("reserve"), "reserve") : Rational(0);
    const Json& bidders = field(doc, "bidders", "instance");
    if (!bidders.is_array()) fail("bidders: expected an array");
    for (std::size_t i = 0; i < bidders.size(); ++i) {
      const std::string where = "bidders[" + std::to_string(i) + "]";
      const Json& b = bidders[i];
      env.bidders.push_back({string_field(b, "id", where), parse_number(field(b, "value", where), where + ".value"),
                             parse_number(field(b, "quantity", where), where + ".quantity")});
    }
    inst.env = std::move(env);
  } else if (kind == "procurement") {
    ProcurementEnv env;
    env.demand = parse_number(field(doc, "demand", "instance"), "demand");
    env.price_cap = parse_number(field(doc, "price_cap", "instance"), "price_cap");
    const Json& sellers = field(doc, "sellers", "instance");
    if (!sellers.is_array()) fail("sellers: expected an array");
    for (std::size_t i = 0; i < sellers.size(); ++i) {
      const std::string where = "sellers[" + std::to_string(i) + "]";
      const Json& s = sellers[i];
      env.sellers.push_back({string_field(s, "id", where), parse_number(field(s, "cost", where), where + ".cost"),
                             parse_number(field(s, "capacity", where), where + ".capacity")});
    }
    inst.env = std::move(env);
  } else {
    fail("instance: unknown kind \"" + kind + "\"");
  }
  if (doc.contains("grid")) {
    const Json& g = doc.at("grid");
    inst.grid = GridConfig{parse_number(field(g, "epsilon", "grid"), "grid.epsilon"),
                           parse_number(field(g, "max_bid", "grid"), "grid.max_bid")};
  }
  if (doc.contains("profile")) inst.profile = parse_profile(doc.at("profile"));
  return inst;
}

Json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    fail(path + ": " + e.what());
  }
}

Instance load_instance(const std::string& path) { return parse_instance(load_json(path)); }

Json to_json(const Outcome& o, bool with_trace) {
  Json out;
  out["price"] = o.price.str();
  out["allocation"] = id_map(o.allocation);
  out["canonical_bids"] = id_map(o.canonical_bids);
  out["dropout_order"] = o.dropout_order;
  out["residual"] = o.residual ? Json(*o.residual) : Json(nullptr);
  if (with_trace) {
    Json steps = Json::array();
    for (const auto& rec : o.trace) {
      Json s;
      s["step"] = rec.step;
      s["remaining"] = rec.remaining;
      s["floor"] = rec.floor_price.str();
      s["supply"] = rec.supply.str();
      s["action"] = std::string(to_string(rec.action));
      s["subject"] = rec.subject ? Json(*rec.subject) : Json(nullptr);
      Json th = Json::array();
      for (const auto& t : rec.thresholds) {
        th.push_back({{"id", t.id}, {"bar", t.bar.str()}, {"hat", t.hat.str()}, {"residual_type", t.residual_type}});
      }
      s["thresholds"] = std::move(th);
      steps.push_back(std::move(s));
    }
    out["trace"] = std::move(steps);
  }
  return out;
}

Json to_json(const ClockEvent& event) {
  return std::visit(
      [](const auto& e) -> Json {
        using T = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<T, OpenEvent>) {
          return {{"kind", "open"}, {"price", e.price.str()}, {"active", e.active}};
        } else if constexpr (std::is_same_v<T, DropoutEvent>) {
          return {{"kind", "dropout"}, {"bidder", e.bidder}, {"price", e.price.str()}};
        } else if constexpr (std::is_same_v<T, ProvisionalUpdateEvent>) {
          return {{"kind", "update"}, {"price", e.price.str()}};
        } else {
          return {{"kind", "finish"},
                  {"case", std::string(to_string(e.kind))},
                  {"price", e.price.str()},
                  {"allocation", id_map(e.allocation)}};
        }
      },
      event);
}

Json to_json(const BidProfile& profile) { return id_map(profile); }

std::optional<std::string> compare_outcome(const Json& expected, const Json& actual) {
  if (!expected.is_object()) return "expected result is not an object";
  for (const auto& [key, value] : expected.items()) {
    if (!actual.contains(key)) return "unknown field \"" + key + "\"";
    if (actual.at(key) != value) {
      return "field \"" + key + "\" differs: expected " + value.dump() + ", got " + actual.at(key).dump();
    }
  }
  return std::nullopt;
}

void print_outcome(std::ostream& os, const Outcome& o, bool with_trace) {
  os << "price: " << o.price << '\n';
  os << "allocation:\n";
  for (const auto& [id, units] : o.allocation) {
    os << "  " << id << ": " << units;
    if (const auto it = o.canonical_bids.find(id); it != o.canonical_bids.end()) os << " (bid " << it->second << ")";
    os << '\n';
  }
  os << "dropout order:";
  if (o.dropout_order.empty()) os << " none";
  for (const auto& id : o.dropout_order) os << ' ' << id;
  os << '\n';
  if (o.residual) os << "residual: " << *o.residual << '\n';
  if (!with_trace) return;
  for (const auto& rec : o.trace) {
    os << "step " << rec.step << ": floor " << rec.floor_price << ", supply " << rec.supply << ", "
       << to_string(rec.action);
    if (rec.subject) os << ' ' << *rec.subject;
    os << '\n';
    for (const auto& t : rec.thresholds) {
      os << "  " << t.id << ": bar " << t.bar << ", hat " << t.hat << (t.residual_type ? ", residual-type" : "")
         << '\n';
    }
  }
}

}  // namespace uniprice::cli
