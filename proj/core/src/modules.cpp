#include "subsig/modules.hpp"

#include <bit>

#include "subsig/binomial.hpp"

namespace subsig {

namespace {

void require_validated(const ModuleDecomposition& decomp, const char* what) {
  if (!decomp.validated)
    throw DomainError(std::string(what) + ": decomposition has not been validated");
}

/// Precomputed index maps for one decomposition.
struct ModuleContext {
  int n, m, rest_size;
  std::vector<int> module_comps;  // ascending labels of M
  std::vector<int> rest_comps;    // ascending labels of C\M
  int macro_pos;                  // 1-based position of [M] within psi
  std::vector<std::uint32_t> rest_to_reduced;  // per rest position: psi bit

  explicit ModuleContext(const ModuleDecomposition& d) {
    n = d.system_size();
    m = d.module_set.count();
    module_comps = d.module_set.components();
    rest_comps = (ComponentSet::full(n) - d.module_set).components();
    rest_size = static_cast<int>(rest_comps.size());
    macro_pos = d.macro_position();
    const std::vector<int> reduced = d.reduced_labels();
    rest_to_reduced.assign(static_cast<std::size_t>(rest_size), 0);
    for (std::size_t r = 0; r < reduced.size(); ++r) {
      if (static_cast<int>(r) + 1 == macro_pos) continue;
      for (std::size_t t = 0; t < rest_comps.size(); ++t)
        if (rest_comps[t] == reduced[r])
          rest_to_reduced[t] = std::uint32_t{1} << r;
    }
  }

  /// Local mask over rest positions -> psi subset mask (macro bit clear).
  std::uint32_t reduced_mask(std::uint32_t rest_mask) const {
    std::uint32_t out = 0;
    for (std::uint32_t r = rest_mask; r != 0; r &= r - 1)
      out |= rest_to_reduced[static_cast<std::size_t>(std::countr_zero(r))];
    return out;
  }

  /// Local mask over rest positions -> global component mask.
  std::uint32_t global_rest_mask(std::uint32_t rest_mask) const {
    std::uint32_t out = 0;
    for (std::uint32_t r = rest_mask; r != 0; r &= r - 1)
      out |= std::uint32_t{1}
             << (rest_comps[static_cast<std::size_t>(std::countr_zero(r))] - 1);
    return out;
  }

  /// Local mask over module positions -> global component mask.
  std::uint32_t global_module_mask(std::uint32_t local_mask) const {
    std::uint32_t out = 0;
    for (std::uint32_t r = local_mask; r != 0; r &= r - 1)
      out |= std::uint32_t{1}
             << (module_comps[static_cast<std::size_t>(std::countr_zero(r))] - 1);
    return out;
  }

  int delta_macro_psi(const StructureFunction& psi, std::uint32_t reduced) const {
    const std::uint32_t macro_bit = std::uint32_t{1} << (macro_pos - 1);
    return static_cast<int>(psi.value(reduced | macro_bit)) -
           static_cast<int>(psi.value(reduced));
  }
};

/// Closed-form ratio q_j(A u B) / q_j^M(A) under exchangeable lifetimes:
/// m C(m-1, m-k) / (n C(n-1, m-k+|B|)) with |A| = m-k.
Rational exchangeable_ratio(int n, int m, int k, int b_size) {
  const Integer num = Integer(m) * binom(static_cast<unsigned>(m - 1),
                                         static_cast<unsigned>(m - k));
  const Integer den = Integer(n) * binom(static_cast<unsigned>(n - 1),
                                         static_cast<unsigned>(m - k + b_size));
  return make_rational(num, den);
}

}  // namespace

Rational ReducedQualityFunction::value(ComponentSet a) const {
  const auto it = values.find(a.mask());
  return it == values.end() ? Rational(0) : it->second;
}

int module_lifetime_position(const StructureFunction& chi, const std::vector<int>& local_order) {
  check_ordering(local_order, chi.component_count());
  std::uint32_t alive = (std::uint32_t{1} << chi.component_count()) - 1;
  if (!chi.value(alive)) throw DomainError("module structure has chi(M) = 0");
  for (std::size_t i = 0; i < local_order.size(); ++i) {
    alive &= ~(std::uint32_t{1} << (local_order[i] - 1));
    if (!chi.value(alive)) return static_cast<int>(i) + 1;
  }
  throw DomainError("module structure has chi(empty) = 1");
}

ReducedQualityFunction reduced_quality(const OrderingDistribution& dist,
                                       const ModuleDecomposition& decomp) {
  require_validated(decomp, "reduced_quality");
  if (!dist.enumerable())
    throw CapabilityError("reduced_quality needs an explicit distribution");
  const ModuleContext ctx(decomp);
  if (dist.component_count() != ctx.n)
    throw DomainError("distribution and decomposition component counts differ");

  // Local rank of each module component, for the chi replay.
  std::vector<int> local_rank(static_cast<std::size_t>(ctx.n) + 1, 0);
  for (std::size_t t = 0; t < ctx.module_comps.size(); ++t)
    local_rank[static_cast<std::size_t>(ctx.module_comps[t])] = static_cast<int>(t) + 1;

  ReducedQualityFunction rq{decomp.module_set, {}};
  const auto flat = dist.flat_orderings();
  const auto mass = dist.masses();
  std::vector<int> module_order;
  module_order.reserve(static_cast<std::size_t>(ctx.m));
  for (std::size_t row = 0; row < mass.size(); ++row) {
    const std::uint8_t* order = flat.data() + row * static_cast<std::size_t>(ctx.n);
    module_order.clear();
    for (int i = 0; i < ctx.n; ++i)
      if (const int lr = local_rank[order[i]]; lr != 0) module_order.push_back(lr);
    const int dies_at = module_lifetime_position(decomp.chi, module_order);
    // Global position of the module-killing failure.
    int global_pos = -1, seen = 0;
    for (int i = 0; i < ctx.n; ++i)
      if (local_rank[order[i]] != 0 && ++seen == dies_at) {
        global_pos = i;
        break;
      }
    std::uint32_t survivors = 0;  // rest components outliving T_M
    for (int i = global_pos + 1; i < ctx.n; ++i)
      if (local_rank[order[i]] == 0) survivors |= std::uint32_t{1} << (order[i] - 1);
    rq.values[survivors] += mass[row];
  }
  return rq;
}

Rational module_attribution(const OrderingDistribution& dist,
                            const ModuleDecomposition& decomp) {
  require_validated(decomp, "module_attribution");
  const ModuleContext ctx(decomp);
  const ReducedQualityFunction rq = reduced_quality(dist, decomp);
  Rational acc = 0;
  for (const auto& [global_mask, p] : rq.values) {
    // Map the global survivor set into psi indexing.
    std::uint32_t rest_mask = 0;
    for (std::size_t t = 0; t < ctx.rest_comps.size(); ++t)
      if (global_mask & (std::uint32_t{1} << (ctx.rest_comps[t] - 1)))
        rest_mask |= std::uint32_t{1} << t;
    if (ctx.delta_macro_psi(decomp.psi, ctx.reduced_mask(rest_mask)) == 1) acc += p;
  }
  return acc;
}

SubsignatureVector module_signature(const StructureFunction& chi,
                                    const OrderingDistribution& dist, ComponentSet m) {
  if (m.count() != chi.component_count())
    throw DomainError("module structure and modular set sizes differ");
  const OrderingDistribution marginal = dist.marginalize(m);
  SubsignatureVector sig = probability_signature(chi, marginal);
  if (marginal.enumerable()) {
    const SubsignatureVector by_oracle =
        subsignature_oracle(chi, marginal, ComponentSet::full(chi.component_count()));
    if (by_oracle.values != sig.values)
      throw std::logic_error("module signature: oracle and formula routes disagree");
  }
  sig.set = m;
  return sig;
}

FactorizationReport factorization_check(const OrderingDistribution& dist,
                                        const ModuleDecomposition& decomp) {
  require_validated(decomp, "factorization_check");
  const ModuleContext ctx(decomp);
  if (dist.component_count() != ctx.n)
    throw DomainError("distribution and decomposition component counts differ");

  FactorizationReport report;
  report.factors.assign(static_cast<std::size_t>(ctx.m), std::nullopt);

  if (dist.symbolic_exchangeable()) {
    report.holds = true;
    // Bucket Delta_[M] psi by |B|; the ratio depends on |B| only.
    std::vector<long> delta_per_level(static_cast<std::size_t>(ctx.rest_size) + 1, 0);
    for (std::uint32_t rest = 0; rest < (std::uint32_t{1} << ctx.rest_size); ++rest)
      delta_per_level[static_cast<std::size_t>(std::popcount(rest))] +=
          ctx.delta_macro_psi(decomp.psi, ctx.reduced_mask(rest));
    for (int k = 1; k <= ctx.m; ++k) {
      Rational factor = 0;
      for (int b = 0; b <= ctx.rest_size; ++b)
        if (delta_per_level[static_cast<std::size_t>(b)] != 0)
          factor += Rational(delta_per_level[static_cast<std::size_t>(b)]) *
                    exchangeable_ratio(ctx.n, ctx.m, k, b);
      report.factors[static_cast<std::size_t>(k - 1)] = std::move(factor);
    }
    return report;
  }

  const OrderingDistribution marginal = dist.marginalize(decomp.module_set);
  report.holds = true;
  for (int a_size = 0; a_size <= ctx.m - 1 && report.holds; ++a_size) {
    // Admissible pairs (j, A) at this level: q_j^M(A) != 0.
    struct Pair {
      int j_local;
      std::uint32_t a_local;
      Rational qjm;
    };
    std::vector<Pair> pairs;
    for (std::uint32_t a_local = 0; a_local < (std::uint32_t{1} << ctx.m); ++a_local) {
      if (std::popcount(a_local) != a_size) continue;
      for (int j_local = 1; j_local <= ctx.m; ++j_local) {
        if (a_local & (std::uint32_t{1} << (j_local - 1))) continue;
        Rational qjm = marginal.q_component(j_local, ComponentSet(a_local));
        if (qjm != 0) pairs.push_back({j_local, a_local, std::move(qjm)});
      }
    }
    if (pairs.empty()) continue;  // p_{m-a_size}^M = 0; factor stays undefined

    const int k = ctx.m - a_size;
    Rational factor = 0;
    for (std::uint32_t rest = 0; rest < (std::uint32_t{1} << ctx.rest_size); ++rest) {
      const std::uint32_t b_global = ctx.global_rest_mask(rest);
      Rational ratio0;
      bool have_ratio0 = false;
      for (const Pair& pr : pairs) {
        const std::uint32_t a_global = ctx.global_module_mask(pr.a_local);
        const int j_global = ctx.module_comps[static_cast<std::size_t>(pr.j_local - 1)];
        const Rational ratio =
            dist.q_component(j_global, ComponentSet(a_global | b_global)) / pr.qjm;
        if (!have_ratio0) {
          ratio0 = ratio;
          have_ratio0 = true;
        } else if (ratio != ratio0) {
          report.holds = false;
          report.witness = FactorizationWitness{
              ctx.module_comps[static_cast<std::size_t>(pairs.front().j_local - 1)],
              j_global, ComponentSet(ctx.global_module_mask(pairs.front().a_local)),
              ComponentSet(a_global), ComponentSet(b_global)};
          break;
        }
      }
      if (!report.holds) break;
      const int d = ctx.delta_macro_psi(decomp.psi, ctx.reduced_mask(rest));
      if (d != 0) factor += Rational(d) * ratio0;
    }
    if (report.holds) report.factors[static_cast<std::size_t>(k - 1)] = std::move(factor);
  }
  if (!report.holds) report.factors.assign(static_cast<std::size_t>(ctx.m), std::nullopt);
  return report;
}

SubsignatureVector subsignature_via_module(const OrderingDistribution& dist,
                                           const ModuleDecomposition& decomp) {
  const FactorizationReport report = factorization_check(dist, decomp);
  if (!report.holds)
    throw AssumptionViolated(
        "ratio hypothesis fails: q_j(A u B)/q_j^M(A) differs between (j=" +
            std::to_string(report.witness->j1) + ", A=" + report.witness->a1.to_brace_string() +
            ") and (j=" + std::to_string(report.witness->j2) +
            ", A=" + report.witness->a2.to_brace_string() +
            ") at B=" + report.witness->b.to_brace_string(),
        *report.witness);
  const SubsignatureVector module_sig = module_signature(decomp.chi, dist, decomp.module_set);
  SubsignatureVector out{decomp.module_set,
                         std::vector<Rational>(module_sig.values.size(), Rational(0))};
  for (std::size_t i = 0; i < module_sig.values.size(); ++i) {
    if (module_sig.values[i] == 0) continue;  // p_M^(k) vanishes with p_k^M
    if (!report.factors[i])
      throw std::logic_error("factorization: nonzero module signature without a factor");
    out.values[i] = module_sig.values[i] * *report.factors[i];
  }
  return out;
}

Rational exchangeable_module_attribution(const ModuleDecomposition& decomp) {
  require_validated(decomp, "exchangeable_module_attribution");
  return integrate_unit(decomp.psi.reliability_partial_diagonal(decomp.macro_position()));
}

StructuralSubsignature exchangeable_module_subsignature(const ModuleDecomposition& decomp) {
  require_validated(decomp, "exchangeable_module_subsignature");
  const int m = decomp.module_set.count();
  const Polynomial derivative =
      decomp.psi.reliability_partial_diagonal(decomp.macro_position());
  const std::vector<Rational> module_sig = structural_signature(decomp.chi);
  StructuralSubsignature out{decomp.module_set,
                             std::vector<Rational>(static_cast<std::size_t>(m), Rational(0))};
  for (int k = 1; k <= m; ++k) {
    const Rational& sk = module_sig[static_cast<std::size_t>(k - 1)];
    if (sk == 0) continue;
    out.values[static_cast<std::size_t>(k - 1)] =
        sk * integrate_beta_weighted(derivative, static_cast<unsigned>(k),
                                     static_cast<unsigned>(m));
  }
  return out;
}

}  // namespace subsig
