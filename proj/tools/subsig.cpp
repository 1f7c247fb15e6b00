// Command line front end: reads a system spec file, dispatches the exact
// engines or the Monte Carlo estimators, and prints JSON results.
//
// Exit codes: 0 success, 1 validation failure, 2 usage error,
// 3 capability error (size caps, unavailable exact law).

#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "subsig/modules.hpp"
#include "subsig/monte_carlo.hpp"
#include "subsig/signature.hpp"
#include "subsig/spec_io.hpp"

namespace {

using nlohmann::json;
using namespace subsig;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitUsage = 2;
constexpr int kExitCapability = 3;

json rationals_to_json(const std::vector<Rational>& values) {
  json out = json::array();
  for (const Rational& v : values) out.push_back(to_string(v));
  return out;
}

json set_to_json(ComponentSet s) {
  json out = json::array();
  for (int c : s.components()) out.push_back(c);
  return out;
}

ComponentSet parse_set_flag(const std::string& text, int n) {
  if (text.empty()) throw DomainError("--set component list must not be empty");
  ComponentSet out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t next = text.find(',', pos);
    if (next == std::string::npos) next = text.size();
    const std::string token = text.substr(pos, next - pos);
    try {
      const int c = std::stoi(token);
      if (c < 1 || c > n)
        throw DomainError("component " + std::to_string(c) + " outside 1.." + std::to_string(n));
      out = out.with(c);
    } catch (const std::invalid_argument&) {
      throw DomainError("invalid component token \"" + token + "\" in --set");
    } catch (const std::out_of_range&) {
      throw DomainError("invalid component token \"" + token + "\" in --set");
    }
    pos = next + 1;
  }
  if (out.empty()) throw DomainError("--set selects no components");
  return out;
}

void emit(const json& out) { std::cout << out.dump() << "\n"; }

int cmd_validate(const SystemSpec& spec) {
  json issues = json::array();
  const ValidationReport report = spec.structure.validate_semicoherent();
  for (const ValidationIssue& issue : report.issues) issues.push_back(issue.describe());
  for (std::size_t i = 0; i < spec.modules.size(); ++i) {
    const auto& declared = spec.modules[i];
    const ModuleDecomposition decomp =
        make_module_decomposition(spec.structure, declared.set, declared.chi);
    if (!decomp.validated)
      issues.push_back("module " + std::to_string(i) + " (" +
                       declared.set.to_brace_string() +
                       "): composition does not reproduce the structure");
  }
  const bool valid = issues.empty();
  emit(json{{"valid", valid}, {"issues", issues}});
  return valid ? kExitOk : kExitValidation;
}

int cmd_signature(const SystemSpec& spec) {
  const OrderingDistribution dist = spec.exact_distribution();
  const SubsignatureVector sig = probability_signature(spec.structure, dist);
  emit(json{{"n", spec.n},
            {"signature", rationals_to_json(sig.values)},
            {"route_agreement", true}});
  return kExitOk;
}

int cmd_subsig(const SystemSpec& spec, const std::string& set_text, bool normalized) {
  const ComponentSet m = parse_set_flag(set_text, spec.n);
  const OrderingDistribution dist = spec.exact_distribution();
  json out{{"set", set_to_json(m)}};
  if (normalized) {
    const Rational attribution = failure_attribution(spec.structure, dist, m);
    out["normalized"] = true;
    out["attribution"] = to_string(attribution);
    out["values"] = rationals_to_json(normalized_subsignature(spec.structure, dist, m));
  } else {
    out["values"] = rationals_to_json(subsignature_direct(spec.structure, dist, m).values);
  }
  emit(out);
  return kExitOk;
}

int cmd_bp(const SystemSpec& spec) {
  const OrderingDistribution dist = spec.exact_distribution();
  emit(json{{"values", rationals_to_json(barlow_proschan(spec.structure, dist).values)}});
  return kExitOk;
}

int cmd_domination(const SystemSpec& spec) {
  const DominationFunction d = DominationFunction::from_structure(spec.structure);
  json out = json::object();
  for (const auto& [mask, coef] : d.coefficients())
    out[ComponentSet(mask).to_brace_string()] = coef;
  emit(out);
  return kExitOk;
}

int cmd_module(const SystemSpec& spec, int module_index) {
  if (module_index < 0 || module_index >= static_cast<int>(spec.modules.size()))
    throw DomainError("--module index " + std::to_string(module_index) +
                      " out of range; spec declares " + std::to_string(spec.modules.size()) +
                      " module(s)");
  const auto& declared = spec.modules[static_cast<std::size_t>(module_index)];
  const ModuleDecomposition decomp =
      make_module_decomposition(spec.structure, declared.set, declared.chi);
  if (!decomp.validated)
    throw SpecError("module " + declared.set.to_brace_string() +
                    ": composition does not reproduce the structure");
  const OrderingDistribution dist = spec.exact_distribution();

  const Rational attribution = failure_attribution(spec.structure, dist, decomp.module_set);
  if (dist.enumerable() && module_attribution(dist, decomp) != attribution)
    throw std::logic_error("module attribution routes disagree");

  const FactorizationReport report = factorization_check(dist, decomp);
  json factorization{{"holds", report.holds}};
  if (report.holds) {
    json factors = json::array();
    for (const auto& f : report.factors)
      factors.push_back(f ? json(to_string(*f)) : json(nullptr));
    factorization["factors"] = factors;
  } else {
    factorization["witness"] = json{{"j1", report.witness->j1},
                                    {"a1", set_to_json(report.witness->a1)},
                                    {"j2", report.witness->j2},
                                    {"a2", set_to_json(report.witness->a2)},
                                    {"b", set_to_json(report.witness->b)}};
  }

  json out{{"module", set_to_json(decomp.module_set)},
           {"attribution", to_string(attribution)},
           {"module_signature",
            rationals_to_json(module_signature(decomp.chi, dist, decomp.module_set).values)},
           {"factorization", factorization}};
  out["via_module"] =
      report.holds ? rationals_to_json(subsignature_via_module(dist, decomp).values)
                   : json(nullptr);
  emit(out);
  return kExitOk;
}

json estimate_to_json(const EstimateWithCI& e, const std::optional<Rational>& exact) {
  json out{{"estimate", e.estimate}, {"std_error", e.std_error}};
  if (exact) {
    const double ex = exact->get_d();
    out["exact"] = to_string(*exact);
    out["abs_error"] = std::abs(e.estimate - ex);
    out["sigmas"] = e.std_error > 0 ? std::abs(e.estimate - ex) / e.std_error : 0.0;
  } else {
    out["exact"] = nullptr;
  }
  return out;
}

int cmd_mc(const SystemSpec& spec, const std::string& target, const std::string& set_text,
           int module_index, std::uint64_t samples, std::uint64_t seed, int threads) {
  if (!spec.continuous)
    throw CapabilityError("lifetime kind \"" + spec.lifetime_kind +
                          "\" has no sampling model; Monte Carlo unavailable");
  const ContinuousLifetimeModel& model = *spec.continuous;
  McOptions options{samples, seed, threads};

  // Exact reference values when the lifetime law admits them.
  std::optional<OrderingDistribution> exact;
  if (spec.has_exact()) {
    try {
      exact = spec.exact_distribution();
    } catch (const CapabilityError&) {
      // exponential rates beyond the enumeration cap: estimate only
    }
  }

  json out{{"target", target}, {"samples", samples},   {"seed", seed},
           {"rng", kRngId},    {"threads", threads}};
  if (target == "subsig") {
    const ComponentSet m = parse_set_flag(set_text, spec.n);
    const McVectorResult result = estimate_subsignature(spec.structure, m, model, options);
    std::vector<Rational> exact_values;
    if (exact) exact_values = subsignature_direct(spec.structure, *exact, m).values;
    json estimates = json::array();
    for (std::size_t k = 0; k < result.estimates.size(); ++k) {
      json e = estimate_to_json(result.estimates[k],
                                exact ? std::optional<Rational>(exact_values[k]) : std::nullopt);
      e["k"] = static_cast<int>(k) + 1;
      estimates.push_back(std::move(e));
    }
    out["set"] = set_to_json(m);
    out["estimates"] = estimates;
    out["ties_resampled"] = result.ties_resampled;
  } else if (target == "bp") {
    const McVectorResult result = estimate_bp(spec.structure, model, options);
    std::vector<Rational> exact_values;
    if (exact) exact_values = barlow_proschan(spec.structure, *exact).values;
    json estimates = json::array();
    for (std::size_t j = 0; j < result.estimates.size(); ++j) {
      json e = estimate_to_json(result.estimates[j],
                                exact ? std::optional<Rational>(exact_values[j]) : std::nullopt);
      e["j"] = static_cast<int>(j) + 1;
      estimates.push_back(std::move(e));
    }
    out["estimates"] = estimates;
    out["ties_resampled"] = result.ties_resampled;
  } else if (target == "module") {
    if (module_index < 0 || module_index >= static_cast<int>(spec.modules.size()))
      throw DomainError("--module index out of range");
    const auto& declared = spec.modules[static_cast<std::size_t>(module_index)];
    const ModuleDecomposition decomp =
        make_module_decomposition(spec.structure, declared.set, declared.chi);
    if (!decomp.validated)
      throw SpecError("module " + declared.set.to_brace_string() +
                      ": composition does not reproduce the structure");
    const McScalarResult result = estimate_module_attribution(decomp, model, options);
    std::optional<Rational> exact_value;
    if (exact) exact_value = failure_attribution(spec.structure, *exact, decomp.module_set);
    out["module"] = set_to_json(decomp.module_set);
    out["estimate"] = estimate_to_json(result.estimate, exact_value);
    out["ties_resampled"] = result.ties_resampled;
  } else {
    throw DomainError("unknown --target \"" + target + "\" (expected subsig, bp or module)");
  }
  emit(out);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact signatures, subsignatures and Barlow-Proschan importance "
               "of semicoherent systems"};
  app.require_subcommand(1);
  int threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  app.add_option("--threads", threads, "Worker threads for sampling commands")
      ->check(CLI::PositiveNumber);

  std::string spec_path, set_text, target = "subsig";
  bool normalized = false;
  int module_index = 0;
  std::uint64_t samples = 100000, seed = 0;

  auto add_spec_arg = [&](CLI::App* cmd) {
    cmd->add_option("spec", spec_path, "System spec JSON file")->required();
  };

  CLI::App* validate = app.add_subcommand("validate", "Check semicoherence and declared modules");
  add_spec_arg(validate);

  CLI::App* signature = app.add_subcommand("signature", "Probability signature (exact)");
  add_spec_arg(signature);

  CLI::App* subsig_cmd = app.add_subcommand("subsig", "M-signature for a component set");
  add_spec_arg(subsig_cmd);
  subsig_cmd->add_option("--set", set_text, "Components of M, e.g. \"1,3\"")->required();
  subsig_cmd->add_flag("--normalized", normalized, "Normalize by the attribution probability");

  CLI::App* bp = app.add_subcommand("bp", "Barlow-Proschan importance index (exact)");
  add_spec_arg(bp);

  CLI::App* domination = app.add_subcommand("domination", "Signed domination function");
  add_spec_arg(domination);

  CLI::App* module_cmd = app.add_subcommand("module", "Module attribution and factorization");
  add_spec_arg(module_cmd);
  module_cmd->add_option("--module", module_index, "Index into the spec's modules array");

  CLI::App* mc = app.add_subcommand("mc", "Monte Carlo estimates with confidence intervals");
  add_spec_arg(mc);
  mc->add_option("--target", target, "subsig | bp | module");
  mc->add_option("--set", set_text, "Components of M for --target subsig");
  mc->add_option("--module", module_index, "Module index for --target module");
  mc->add_option("--samples", samples, "Sample count")->check(CLI::PositiveNumber);
  mc->add_option("--seed", seed, "RNG seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    const SystemSpec spec = load_system_spec(spec_path);
    if (validate->parsed()) return cmd_validate(spec);
    if (signature->parsed()) return cmd_signature(spec);
    if (subsig_cmd->parsed()) return cmd_subsig(spec, set_text, normalized);
    if (bp->parsed()) return cmd_bp(spec);
    if (domination->parsed()) return cmd_domination(spec);
    if (module_cmd->parsed()) return cmd_module(spec, module_index);
    if (mc->parsed()) return cmd_mc(spec, target, set_text, module_index, samples, seed, threads);
    std::cerr << "no subcommand selected\n";
    return kExitUsage;
  } catch (const CapabilityError& e) {
    std::cerr << "capability error: " << e.what() << "\n";
    return kExitCapability;
  } catch (const NormalizationUndefined& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const ParseError& e) {
    std::cerr << "formula error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const SpecError& e) {
    std::cerr << "spec error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const DomainError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const CLI::Error& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitUsage;
  }
}
