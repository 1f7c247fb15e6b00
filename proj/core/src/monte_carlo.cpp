#include "subsig/monte_carlo.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <numeric>
#include <thread>

#include "subsig/modules.hpp"

namespace subsig {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t kChunk = 1 << 14;

void check_model(const ContinuousLifetimeModel& model) {
  if (model.n < 1 || model.n > kMaxComponents)
    throw CapabilityError("lifetime model needs 1.." + std::to_string(kMaxComponents) +
                          " components");
  switch (model.kind) {
    case ContinuousLifetimeModel::Kind::IIDExponential:
      if (!(model.rate > 0)) throw SpecError("exponential rate must be positive");
      break;
    case ContinuousLifetimeModel::Kind::IndependentExponential:
      if (static_cast<int>(model.rates.size()) != model.n)
        throw SpecError("expected one rate per component");
      for (double r : model.rates)
        if (!(r > 0)) throw SpecError("exponential rates must be positive");
      break;
    case ContinuousLifetimeModel::Kind::GammaMixture:
      if (model.shape < 1) throw SpecError("gamma mixture shape must be a positive integer");
      break;
  }
}

/// Runs fn(sample_index, per-thread state) over all samples in fixed-size
/// chunks; merging is by integer accumulation, so the result does not
/// depend on the thread count.
template <typename State, typename Fn>
State run_chunked(const McOptions& options, Fn&& fn) {
  const int threads = std::max(1, options.threads);
  const std::uint64_t chunks = (options.samples + kChunk - 1) / kChunk;
  std::vector<State> states(static_cast<std::size_t>(threads));
  std::atomic<std::uint64_t> next_chunk{0};
  auto worker = [&](State& state) {
    for (;;) {
      const std::uint64_t c = next_chunk.fetch_add(1);
      if (c >= chunks) break;
      const std::uint64_t lo = c * kChunk;
      const std::uint64_t hi = std::min(options.samples, lo + kChunk);
      for (std::uint64_t s = lo; s < hi; ++s) fn(s, state);
    }
  };
  if (threads == 1) {
    worker(states[0]);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (State& state : states) pool.emplace_back(worker, std::ref(state));
    for (std::thread& t : pool) t.join();
  }
  State merged;
  for (State& state : states) merged.merge(state);
  return merged;
}

EstimateWithCI to_estimate(std::uint64_t hits, const McOptions& options) {
  const double p = static_cast<double>(hits) / static_cast<double>(options.samples);
  return EstimateWithCI{
      p, std::sqrt(p * (1.0 - p) / static_cast<double>(options.samples)),
      options.samples, options.seed};
}

struct CountState {
  std::vector<std::uint64_t> hits;
  std::uint64_t ties = 0;
  void merge(const CountState& other) {
    if (hits.size() < other.hits.size()) hits.resize(other.hits.size(), 0);
    for (std::size_t i = 0; i < other.hits.size(); ++i) hits[i] += other.hits[i];
    ties += other.ties;
  }
};

void sample_into(const ContinuousLifetimeModel& model, SampleStream& rng,
                 std::vector<double>& lifetimes, std::vector<std::uint8_t>& order,
                 std::uint64_t& ties) {
  const int n = model.n;
  lifetimes.resize(static_cast<std::size_t>(n));
  order.resize(static_cast<std::size_t>(n));
  for (;;) {
    switch (model.kind) {
      case ContinuousLifetimeModel::Kind::IIDExponential:
        for (double& t : lifetimes) t = rng.next_exponential(model.rate);
        break;
      case ContinuousLifetimeModel::Kind::IndependentExponential:
        for (int i = 0; i < n; ++i)
          lifetimes[static_cast<std::size_t>(i)] =
              rng.next_exponential(model.rates[static_cast<std::size_t>(i)]);
        break;
      case ContinuousLifetimeModel::Kind::GammaMixture: {
        double theta = 0;
        for (int s = 0; s < model.shape; ++s) theta += rng.next_exponential(1.0);
        for (double& t : lifetimes) t = rng.next_exponential(theta);
        break;
      }
    }
    for (int i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] =
        static_cast<std::uint8_t>(i + 1);
    std::sort(order.begin(), order.end(), [&](std::uint8_t a, std::uint8_t b) {
      return lifetimes[static_cast<std::size_t>(a - 1)] < lifetimes[static_cast<std::size_t>(b - 1)];
    });
    bool tied = false;
    for (int i = 0; i + 1 < n; ++i)
      if (lifetimes[static_cast<std::size_t>(order[static_cast<std::size_t>(i)] - 1)] ==
          lifetimes[static_cast<std::size_t>(order[static_cast<std::size_t>(i + 1)] - 1)]) {
        tied = true;
        break;
      }
    if (!tied) return;
    ++ties;  // resample; never order tied values silently
  }
}

}  // namespace

SampleStream::SampleStream(std::uint64_t seed, std::uint64_t stream) {
  state_ = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  state_ = splitmix64(state_) ^ seed;
}

std::uint64_t SampleStream::next_u64() { return splitmix64(state_); }

double SampleStream::next_unit() {
  return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
}

double SampleStream::next_exponential(double rate) { return -std::log(next_unit()) / rate; }

ContinuousLifetimeModel ContinuousLifetimeModel::iid_exponential(int n, double rate) {
  ContinuousLifetimeModel m{Kind::IIDExponential, n, rate, {}, 1};
  check_model(m);
  return m;
}

ContinuousLifetimeModel ContinuousLifetimeModel::independent_exponential(
    std::vector<double> rates) {
  ContinuousLifetimeModel m{Kind::IndependentExponential, static_cast<int>(rates.size()), 1.0,
                            std::move(rates), 1};
  check_model(m);
  return m;
}

ContinuousLifetimeModel ContinuousLifetimeModel::gamma_mixture(int n, int shape) {
  ContinuousLifetimeModel m{Kind::GammaMixture, n, 1.0, {}, shape};
  check_model(m);
  return m;
}

Ordering sample_ordering(const ContinuousLifetimeModel& model, SampleStream& rng,
                         std::uint64_t* tie_counter) {
  check_model(model);
  std::vector<double> lifetimes;
  std::vector<std::uint8_t> order;
  std::uint64_t ties = 0;
  sample_into(model, rng, lifetimes, order, ties);
  if (tie_counter) *tie_counter += ties;
  return Ordering(order.begin(), order.end());
}

McVectorResult estimate_subsignature(const StructureFunction& phi, ComponentSet m,
                                     const ContinuousLifetimeModel& model,
                                     const McOptions& options) {
  check_model(model);
  if (phi.component_count() != model.n)
    throw DomainError("structure and lifetime model component counts differ");
  if (m.empty() || !m.subset_of(ComponentSet::full(model.n)))
    throw DomainError("M must be a nonempty subset of 1.." + std::to_string(model.n));
  if (options.samples < 1) throw DomainError("sample count must be at least 1");
  const int msize = m.count();

  struct State : CountState {
    std::vector<double> lifetimes;
    std::vector<std::uint8_t> order;
  };
  State merged = run_chunked<State>(options, [&](std::uint64_t s, State& state) {
    if (state.hits.empty()) state.hits.assign(static_cast<std::size_t>(msize), 0);
    SampleStream rng(options.seed, s);
    sample_into(model, rng, state.lifetimes, state.order, state.ties);
    const FailureWalk walk = walk_failures(phi, state.order);
    if (m.contains(walk.killer))
      ++state.hits[static_cast<std::size_t>(std::popcount(walk.failed_mask & m.mask())) - 1];
  });

  merged.hits.resize(static_cast<std::size_t>(msize), 0);
  McVectorResult result;
  result.ties_resampled = merged.ties;
  for (int k = 0; k < msize; ++k)
    result.estimates.push_back(to_estimate(merged.hits[static_cast<std::size_t>(k)], options));
  return result;
}

McVectorResult estimate_bp(const StructureFunction& phi, const ContinuousLifetimeModel& model,
                           const McOptions& options) {
  check_model(model);
  if (phi.component_count() != model.n)
    throw DomainError("structure and lifetime model component counts differ");
  if (options.samples < 1) throw DomainError("sample count must be at least 1");
  const int n = model.n;

  struct State : CountState {
    std::vector<double> lifetimes;
    std::vector<std::uint8_t> order;
  };
  State merged = run_chunked<State>(options, [&](std::uint64_t s, State& state) {
    if (state.hits.empty()) state.hits.assign(static_cast<std::size_t>(n), 0);
    SampleStream rng(options.seed, s);
    sample_into(model, rng, state.lifetimes, state.order, state.ties);
    ++state.hits[static_cast<std::size_t>(walk_failures(phi, state.order).killer) - 1];
  });

  merged.hits.resize(static_cast<std::size_t>(n), 0);
  McVectorResult result;
  result.ties_resampled = merged.ties;
  for (int j = 0; j < n; ++j)
    result.estimates.push_back(to_estimate(merged.hits[static_cast<std::size_t>(j)], options));
  return result;
}

McScalarResult estimate_module_attribution(const ModuleDecomposition& decomp,
                                           const ContinuousLifetimeModel& model,
                                           const McOptions& options) {
  if (!decomp.validated)
    throw DomainError("estimate_module_attribution: decomposition has not been validated");
  check_model(model);
  const int n = decomp.system_size();
  if (model.n != n) throw DomainError("lifetime model and decomposition sizes differ");
  if (options.samples < 1) throw DomainError("sample count must be at least 1");

  const StructureFunction phi = compose_module(decomp.psi, decomp.chi, decomp.module_set);
  std::vector<int> local_rank(static_cast<std::size_t>(n) + 1, 0);
  {
    int next = 1;
    for (int c : decomp.module_set.components())
      local_rank[static_cast<std::size_t>(c)] = next++;
  }

  struct State : CountState {
    std::vector<double> lifetimes;
    std::vector<std::uint8_t> order;
    std::vector<int> module_order;
  };
  State merged = run_chunked<State>(options, [&](std::uint64_t s, State& state) {
    if (state.hits.empty()) state.hits.assign(1, 0);
    SampleStream rng(options.seed, s);
    sample_into(model, rng, state.lifetimes, state.order, state.ties);
    const FailureWalk walk = walk_failures(phi, state.order);
    // Position of the module-killing failure in the global ordering.
    state.module_order.clear();
    for (int i = 0; i < n; ++i)
      if (const int lr = local_rank[state.order[static_cast<std::size_t>(i)]]; lr != 0)
        state.module_order.push_back(lr);
    const int dies_at = module_lifetime_position(decomp.chi, state.module_order);
    int global_pos = 0, seen = 0;
    for (int i = 0; i < n; ++i)
      if (local_rank[state.order[static_cast<std::size_t>(i)]] != 0 && ++seen == dies_at) {
        global_pos = i + 1;
        break;
      }
    if (walk.death_position == global_pos) ++state.hits[0];
  });

  merged.hits.resize(1, 0);
  return McScalarResult{to_estimate(merged.hits[0], options), merged.ties};
}

}  // namespace subsig
