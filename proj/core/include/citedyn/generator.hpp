#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "citedyn/history.hpp"
#include "citedyn/types.hpp"

namespace citedyn {

enum class GenerationMode { deterministic, stochastic };

/// Full description of one synthetic citation history. Accepts lambda = 0
/// (zero intensity, so zero events) although fitting and rescaling do not.
struct GeneratorSpec {
  WsbParams params;
  GlobalConstants globals;
  double horizon_days = years_to_days(30.0);
  GenerationMode mode = GenerationMode::stochastic;
  std::uint64_t seed = 0;  ///< required in stochastic mode (reproducibility)
  std::string paper_id = "synthetic";

  void validate() const;
};

/// Synthesize a citation history.
///
/// Deterministic mode differences the closed-form cumulative curve on year
/// boundaries and rounds to integer counts with a carried remainder, so the
/// emitted total equals the rounded expected total. Returns a yearly history.
///
/// Stochastic mode draws a nonhomogeneous Poisson process whose intensity is
/// lambda (c(t) + m) P(t), with c(t) the running event count and P the
/// lognormal aging kernel; the expected trajectory of this process is exactly
/// the closed-form curve. Sampling is by thinning against the analytically
/// known unimodal envelope of P, with no time discretization. Returns an
/// event history.
CitationHistory generate(const GeneratorSpec& spec);

/// Distribution over per-paper parameters, driven by the supplied engine.
using ParamSampler = std::function<WsbParams(std::mt19937_64&)>;

/// n independent histories. Member i draws its parameters and events from a
/// seed derived from (spec.seed, i), so a cohort is reproducible regardless
/// of evaluation order and members can be generated concurrently. When
/// `true_params` is non-null it receives each member's sampled parameters.
std::vector<CitationHistory> generate_cohort(std::size_t n, const ParamSampler& sampler,
                                             const GeneratorSpec& defaults,
                                             std::vector<WsbParams>* true_params = nullptr);

/// Stateless per-member seed derivation (splitmix64 over master ^ f(index)).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

/// Uniform box sampler over (lambda, mu, sigma).
ParamSampler uniform_param_sampler(double lambda_lo, double lambda_hi,
                                   double mu_lo, double mu_hi,
                                   double sigma_lo, double sigma_hi);

}  // namespace citedyn
