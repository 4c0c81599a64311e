#include "compatlab/exact/scenario.hpp"

#include <map>

namespace compatlab::exact {

namespace {

using nlohmann::json;

const json& require(const json& obj, const char* key) {
  if (!obj.is_object() || !obj.contains(key)) throw ConfigError(std::string("scenario is missing '") + key + "'");
  return obj.at(key);
}

template <class Num>
Num parse_number(const json& v) {
  if (v.is_string()) return NumTraits<Num>::parse(v.get<std::string>());
  if (v.is_number_integer()) return NumTraits<Num>::from_int(v.get<long long>());
  if (v.is_number()) {
    if constexpr (NumTraits<Num>::exact)
      throw ConfigError("rational scenarios need integers or \"p/q\" strings, got " + v.dump());
    else
      return v.get<double>();
  }
  throw ConfigError("expected a number, got " + v.dump());
}

template <class Num>
Value<Num> parse_value(const json& v) {
  Value<Num> out;
  if (v.is_array()) {
    for (const auto& c : v) out.push_back(parse_number<Num>(c));
  } else {
    out.push_back(parse_number<Num>(v));
  }
  return out;
}

std::vector<std::size_t> parse_coords(const json& v, std::size_t arity, bool& all) {
  all = false;
  std::vector<std::size_t> coords;
  if (v.is_string()) {
    auto s = v.get<std::string>();
    if (s == "all") {
      all = true;
      return coords;
    }
    if (s == "none") return coords;
    throw ConfigError("coordinate selector must be \"all\", \"none\" or a list, got \"" + s + "\"");
  }
  if (!v.is_array()) throw ConfigError("coordinate selector must be a list");
  for (const auto& c : v) {
    if (!c.is_number_unsigned()) throw ConfigError("coordinates must be nonnegative integers");
    auto idx = c.get<std::size_t>();
    if (idx >= arity && arity != 0) throw ConfigError("coordinate " + std::to_string(idx) + " out of range");
    coords.push_back(idx);
  }
  return coords;
}

template <class Num>
ValueMap<Num> selector(const json& v) {
  bool all = false;
  auto coords = parse_coords(v, 0, all);
  if (all) return identity_map<Num>();
  if (coords.empty()) return trivial_map<Num>();
  return project_map<Num>(std::move(coords));
}

template <class Num>
CompatStructure<Num> parse_structure(const json& doc) {
  CompatStructure<Num> c;
  std::map<std::string, std::size_t> index;
  for (const auto& a : require(doc, "alphas")) {
    auto name = require(a, "name").get<std::string>();
    index[name] = c.size();
    c.add({name, selector<Num>(require(a, "x")), selector<Num>(require(a, "y"))});
  }
  if (doc.contains("order")) {
    for (const auto& rel : doc.at("order")) {
      if (!rel.is_array() || rel.size() != 2) throw ConfigError("order entries are [before, after] pairs");
      auto lo = index.find(rel[0].get<std::string>());
      auto hi = index.find(rel[1].get<std::string>());
      if (lo == index.end() || hi == index.end()) throw ConfigError("order refers to an unknown alpha");
      c.order(lo->second, hi->second);
    }
  }
  if (doc.contains("h")) {
    std::vector<TestFunction<Num>> h;
    for (const auto& t : doc.at("h")) {
      auto name = t.value("name", std::string{});
      if (t.contains("component"))
        h.push_back(component_test<Num>(t.at("component").get<std::size_t>(), name));
      else if (t.contains("indicator"))
        h.push_back(indicator_test<Num>(parse_value<Num>(t.at("indicator")), name));
      else
        throw ConfigError("test function needs 'component' or 'indicator'");
    }
    c.partial(std::move(h));
  }
  return c;
}

template <class Num>
json run_typed(const json& doc) {
  std::vector<std::string> atoms;
  for (const auto& a : require(doc, "atoms")) atoms.push_back(a.get<std::string>());
  std::vector<Num> weights;
  for (const auto& w : require(doc, "weights")) weights.push_back(parse_number<Num>(w));
  auto full = make_space<Num>(atoms, weights);

  std::map<std::string, Rv<Num>> rvs;
  for (const auto& [name, vals] : require(doc, "rvs").items()) {
    std::vector<Value<Num>> values;
    for (const auto& v : vals) values.push_back(parse_value<Num>(v));
    rvs.emplace(name, Rv<Num>(full, std::move(values)));
  }
  // Conditioning happens on the positive-mass atoms only.
  if (full->has_null_atoms()) {
    auto [pruned, kept] = prune(*full);
    for (auto& [name, rv] : rvs) rv = restrict_to(rv, pruned, kept);
  }
  auto rv = [&](const json& check, const char* key) -> const Rv<Num>& {
    auto name = require(check, key).get<std::string>();
    auto it = rvs.find(name);
    if (it == rvs.end()) throw ConfigError("unknown random variable '" + name + "'");
    return it->second;
  };

  auto structure = parse_structure<Num>(require(doc, "structure"));
  json results = json::array();
  bool all_ok = true;
  for (const auto& check : require(doc, "checks")) {
    auto type = require(check, "type").get<std::string>();
    auto expect = check.value("expect", std::string("pass"));
    if (expect != "pass" && expect != "fail") throw ConfigError("expect must be \"pass\" or \"fail\"");
    json entry;
    bool outcome = false;
    if (type == "compatibility") {
      auto r = check_compatibility(rv(check, "x"), rv(check, "y"), structure);
      outcome = r.pass;
      entry = to_json(r);
    } else if (type == "joint") {
      auto r = check_joint_compatibility(rv(check, "x1"), rv(check, "x2"), rv(check, "y"), structure);
      outcome = r.pass;
      entry = to_json(r);
    } else if (type == "dual") {
      auto r = check_dual(rv(check, "x"), rv(check, "y"), structure);
      outcome = r.pass;
      entry = to_json(r);
    } else if (type == "adapted") {
      auto flags = check_adapted(rv(check, "x"), rv(check, "y"), structure);
      outcome = std::all_of(flags.begin(), flags.end(), [](bool b) { return b; });
      entry = {{"kind", "adapted"}, {"per_alpha", flags}, {"pass", outcome}};
    } else if (type == "martingale") {
      std::vector<Rv<Num>> m;
      for (const auto& name : require(check, "m")) {
        auto it = rvs.find(name.get<std::string>());
        if (it == rvs.end()) throw ConfigError("unknown random variable '" + name.get<std::string>() + "'");
        m.push_back(it->second);
      }
      auto r = check_martingale_condition(m, rv(check, "x"), rv(check, "y"), structure);
      outcome = r.pass;
      entry = to_json(r);
    } else {
      throw ConfigError("unknown check type '" + type + "'");
    }
    entry["type"] = type;
    entry["expect"] = expect;
    entry["matches_expectation"] = outcome == (expect == "pass");
    all_ok = all_ok && outcome == (expect == "pass");
    results.push_back(std::move(entry));
  }
  return {{"schema", kScenarioReportSchema},
          {"arithmetic", NumTraits<Num>::name},
          {"atoms", full->size()},
          {"checks", std::move(results)},
          {"pass", all_ok}};
}

}  // namespace

json run_scenario(const json& doc) {
  if (!doc.is_object()) throw ConfigError("scenario must be a JSON object");
  auto schema = doc.value("schema", std::string{});
  if (schema != kScenarioSchema) throw ConfigError("unsupported scenario schema '" + schema + "'");
  auto mode = doc.value("arithmetic", std::string("rational"));
  try {
    if (mode == "rational") return run_typed<Rational>(doc);
    if (mode == "float") return run_typed<double>(doc);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed scenario: ") + e.what());
  } catch (const StructuralError& e) {
    throw ConfigError(std::string("inconsistent scenario: ") + e.what());
  } catch (const PreconditionError& e) {
    throw ConfigError(std::string("inconsistent scenario: ") + e.what());
  }
  throw ConfigError("arithmetic must be \"rational\" or \"float\"");
}

}  // namespace compatlab::exact
