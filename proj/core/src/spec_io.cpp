#include "subsig/spec_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "subsig/formula.hpp"

namespace subsig {

namespace {

using nlohmann::json;

void require_keys(const json& object, std::initializer_list<const char*> allowed,
                  const char* where) {
  for (const auto& [key, _] : object.items()) {
    bool ok = false;
    for (const char* k : allowed) ok = ok || key == k;
    if (!ok) throw SpecError(std::string("unknown field \"") + key + "\" in " + where);
  }
}

const json& require(const json& object, const char* key, const char* where) {
  const auto it = object.find(key);
  if (it == object.end())
    throw SpecError(std::string("missing field \"") + key + "\" in " + where);
  return *it;
}

int require_int(const json& value, const char* what) {
  if (!value.is_number_integer())
    throw SpecError(std::string(what) + " must be an integer");
  return value.get<int>();
}

Rational rational_field(const json& value, const char* what) {
  if (value.is_string()) return parse_rational(value.get<std::string>());
  if (value.is_number_integer()) return Rational(value.get<long>());
  throw SpecError(std::string(what) + " must be a decimal-free rational string");
}

ComponentSet component_list(const json& value, int n, const char* what) {
  if (!value.is_array()) throw SpecError(std::string(what) + " must be an array of components");
  ComponentSet out;
  for (const json& entry : value) {
    const int c = require_int(entry, what);
    if (c < 1 || c > n)
      throw SpecError(std::string(what) + ": component " + std::to_string(c) + " outside 1.." +
                      std::to_string(n));
    if (out.contains(c))
      throw SpecError(std::string(what) + ": duplicate component " + std::to_string(c));
    out = out.with(c);
  }
  return out;
}

StructureFunction parse_structure_block(const json& block, int n, std::string* formula_out) {
  if (!block.is_object()) throw SpecError("\"structure\" must be an object");
  require_keys(block, {"formula", "path_sets"}, "structure");
  const bool has_formula = block.contains("formula");
  const bool has_paths = block.contains("path_sets");
  if (has_formula == has_paths)
    throw SpecError("structure needs exactly one of \"formula\" or \"path_sets\"");
  if (has_formula) {
    const json& f = block["formula"];
    if (!f.is_string()) throw SpecError("structure formula must be a string");
    *formula_out = f.get<std::string>();
    return parse_structure(*formula_out, n);
  }
  const json& sets = block["path_sets"];
  if (!sets.is_array() || sets.empty())
    throw SpecError("path_sets must be a nonempty array of component arrays");
  std::vector<ComponentSet> path_sets;
  for (const json& entry : sets) {
    ComponentSet p = component_list(entry, n, "path set");
    if (p.empty()) throw SpecError("path sets must be nonempty");
    path_sets.push_back(p);
  }
  return StructureFunction::from_path_sets(n, path_sets);
}

void parse_lifetime_block(const json& block, SystemSpec& spec) {
  if (!block.is_object()) throw SpecError("\"lifetime\" must be an object");
  const std::string kind = require(block, "kind", "lifetime").get<std::string>();
  spec.lifetime_kind = kind;
  const int n = spec.n;

  if (kind == "exchangeable") {
    require_keys(block, {"kind"}, "lifetime");
    spec.exact_direct = OrderingDistribution::exchangeable(n);
  } else if (kind == "orderings") {
    require_keys(block, {"kind", "entries"}, "lifetime");
    const json& entries = require(block, "entries", "lifetime");
    if (!entries.is_array() || entries.empty())
      throw SpecError("\"entries\" must be a nonempty array");
    std::vector<std::pair<Ordering, Rational>> parsed;
    for (const json& entry : entries) {
      if (!entry.is_object()) throw SpecError("ordering entries must be objects");
      require_keys(entry, {"order", "p"}, "ordering entry");
      const json& order = require(entry, "order", "ordering entry");
      if (!order.is_array()) throw SpecError("\"order\" must be an array");
      Ordering o;
      for (const json& c : order) o.push_back(require_int(c, "ordering component"));
      parsed.emplace_back(std::move(o),
                          rational_field(require(entry, "p", "ordering entry"), "\"p\""));
    }
    spec.exact_direct = OrderingDistribution::from_orderings(n, parsed);
  } else if (kind == "exponential") {
    require_keys(block, {"kind", "rates"}, "lifetime");
    const json& rates = require(block, "rates", "lifetime");
    if (!rates.is_array() || static_cast<int>(rates.size()) != n)
      throw SpecError("\"rates\" must list one rate per component");
    std::vector<double> sampled;
    for (const json& r : rates) {
      Rational rate = rational_field(r, "exponential rate");
      if (rate <= 0) throw SpecError("exponential rates must be positive");
      sampled.push_back(rate.get_d());
      spec.exponential_rates.push_back(std::move(rate));
    }
    spec.continuous = ContinuousLifetimeModel::independent_exponential(std::move(sampled));
  } else if (kind == "iid_exponential") {
    require_keys(block, {"kind", "rate"}, "lifetime");
    const json& rate = require(block, "rate", "lifetime");
    if (!rate.is_number()) throw SpecError("\"rate\" must be a number");
    spec.continuous = ContinuousLifetimeModel::iid_exponential(n, rate.get<double>());
    spec.exact_direct = OrderingDistribution::exchangeable(n);
  } else if (kind == "independent_exponential") {
    require_keys(block, {"kind", "rates"}, "lifetime");
    const json& rates = require(block, "rates", "lifetime");
    if (!rates.is_array() || static_cast<int>(rates.size()) != n)
      throw SpecError("\"rates\" must list one rate per component");
    std::vector<double> sampled;
    for (const json& r : rates) {
      if (!r.is_number()) throw SpecError("sampling rates must be numbers");
      sampled.push_back(r.get<double>());
    }
    spec.continuous = ContinuousLifetimeModel::independent_exponential(std::move(sampled));
  } else if (kind == "gamma_mixture") {
    require_keys(block, {"kind", "shape"}, "lifetime");
    spec.continuous = ContinuousLifetimeModel::gamma_mixture(
        n, require_int(require(block, "shape", "lifetime"), "\"shape\""));
    spec.exact_direct = OrderingDistribution::exchangeable(n);
  } else {
    throw SpecError("unknown lifetime kind \"" + kind + "\"");
  }
}

}  // namespace

OrderingDistribution SystemSpec::exact_distribution() const {
  if (exact_direct) return *exact_direct;
  if (!exponential_rates.empty())
    return OrderingDistribution::from_exponential_rates(exponential_rates);
  throw CapabilityError("lifetime kind \"" + lifetime_kind +
                        "\" carries no exact ordering law; exact computation unavailable");
}

SystemSpec parse_system_spec(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw SpecError(std::string("invalid JSON: ") + e.what());
  }
  if (!root.is_object()) throw SpecError("spec root must be an object");
  require_keys(root, {"spec_version", "n", "structure", "lifetime", "modules"}, "spec");

  if (require_int(require(root, "spec_version", "spec"), "\"spec_version\"") != kSpecVersion)
    throw SpecError("unsupported spec_version (expected " + std::to_string(kSpecVersion) + ")");

  const int n = require_int(require(root, "n", "spec"), "\"n\"");
  if (n < 1) throw SpecError("\"n\" must be at least 1");
  if (n > kMaxComponents)
    throw CapabilityError("\"n\" exceeds the " + std::to_string(kMaxComponents) +
                          "-component cap");

  std::string formula;
  StructureFunction structure = parse_structure_block(require(root, "structure", "spec"), n,
                                                      &formula);
  const ValidationReport report = structure.validate_semicoherent();
  if (!report.ok())
    throw SpecError("structure is not semicoherent: " + report.issues.front().describe());

  SystemSpec spec{n, std::move(structure), std::move(formula), {}, {}, {}, {}, {}};
  parse_lifetime_block(require(root, "lifetime", "spec"), spec);

  if (root.contains("modules")) {
    const json& modules = root["modules"];
    if (!modules.is_array()) throw SpecError("\"modules\" must be an array");
    for (const json& entry : modules) {
      if (!entry.is_object()) throw SpecError("module entries must be objects");
      require_keys(entry, {"set", "chi"}, "module entry");
      ComponentSet set = component_list(require(entry, "set", "module entry"), n, "module set");
      if (set.empty()) throw SpecError("module set must be nonempty");
      const json& chi = require(entry, "chi", "module entry");
      if (!chi.is_string()) throw SpecError("module \"chi\" must be a formula string");
      spec.modules.push_back(
          {set, parse_structure(chi.get<std::string>(), set.count()), chi.get<std::string>()});
    }
  }
  return spec;
}

SystemSpec load_system_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SpecError("cannot read spec file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_system_spec(buffer.str());
}

}  // namespace subsig
