#pragma once

#include <cstdint>
#include <vector>

#include "subsig/lifetime.hpp"
#include "subsig/signature.hpp"

namespace subsig {

/// Identifier of the pseudo-random generator, echoed into outputs so runs
/// can be reproduced.
inline constexpr const char* kRngId = "splitmix64";

/// Counter-based splitmix64 stream: sample s of a run draws from the
/// stream keyed by (seed, s), so results are independent of how samples
/// are partitioned into chunks or threads.
class SampleStream {
 public:
  SampleStream(std::uint64_t seed, std::uint64_t stream);
  std::uint64_t next_u64();
  /// Uniform on (0, 1], 53-bit resolution.
  double next_unit();
  double next_exponential(double rate);

 private:
  std::uint64_t state_;
};

/// Parametric joint lifetime laws for sampling. Each produces n lifetimes
/// that are almost surely tie-free.
struct ContinuousLifetimeModel {
  enum class Kind { IIDExponential, IndependentExponential, GammaMixture };

  Kind kind = Kind::IIDExponential;
  int n = 0;
  double rate = 1.0;          // IIDExponential
  std::vector<double> rates;  // IndependentExponential
  int shape = 1;              // GammaMixture: integer shape of the shared frailty

  static ContinuousLifetimeModel iid_exponential(int n, double rate);
  static ContinuousLifetimeModel independent_exponential(std::vector<double> rates);
  /// Exchangeable but dependent: T_i = E_i / Theta with E_i iid Exp(1)
  /// and a shared Theta ~ Gamma(shape, 1).
  static ContinuousLifetimeModel gamma_mixture(int n, int shape);

  int component_count() const { return n; }
  /// True when the induced ordering law is the uniform (exchangeable) one.
  bool exchangeable_law() const { return kind != Kind::IndependentExponential; }
};

struct EstimateWithCI {
  double estimate = 0;
  double std_error = 0;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
};

struct McOptions {
  std::uint64_t samples = 100000;
  std::uint64_t seed = 0;
  int threads = 1;
};

struct McVectorResult {
  std::vector<EstimateWithCI> estimates;
  std::uint64_t ties_resampled = 0;
};

struct McScalarResult {
  EstimateWithCI estimate;
  std::uint64_t ties_resampled = 0;
};

/// Samples lifetimes and returns their failure ordering. The measure-zero
/// tie event triggers a full resample and bumps *tie_counter.
Ordering sample_ordering(const ContinuousLifetimeModel& model, SampleStream& rng,
                         std::uint64_t* tie_counter = nullptr);

/// Empirical frequency of (T_C = T_{k:M}) per k, replaying each sampled
/// ordering with the same failure walk the exact oracle uses.
McVectorResult estimate_subsignature(const StructureFunction& phi, ComponentSet m,
                                     const ContinuousLifetimeModel& model,
                                     const McOptions& options);

/// Empirical frequency of (T_C = T_j) per component.
McVectorResult estimate_bp(const StructureFunction& phi, const ContinuousLifetimeModel& model,
                           const McOptions& options);

/// Empirical frequency of (T_C = T_M) for a validated decomposition.
McScalarResult estimate_module_attribution(const ModuleDecomposition& decomp,
                                           const ContinuousLifetimeModel& model,
                                           const McOptions& options);

}  // namespace subsig
