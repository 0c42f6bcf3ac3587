#include "citedyn/generator.hpp"

#include <algorithm>
#include <cmath>

#include "citedyn/model.hpp"

namespace citedyn {

void GeneratorSpec::validate() const {
  // Unlike fitting and rescaling, generation is well-defined at lambda = 0:
  // the intensity is identically zero, so the boundary is admitted here.
  if (!std::isfinite(params.lambda) || !std::isfinite(params.mu) ||
      !std::isfinite(params.sigma)) {
    throw InputError("GeneratorSpec: parameters must be finite");
  }
  if (!(params.lambda >= 0.0)) throw InputError("GeneratorSpec: lambda must be >= 0");
  if (!(params.sigma > 0.0)) throw InputError("GeneratorSpec: sigma must be > 0");
  globals.validate();
  if (!(horizon_days > 0.0) || !std::isfinite(horizon_days)) {
    throw InputError("GeneratorSpec: horizon must be positive and finite");
  }
}

namespace {

CitationHistory generate_deterministic(const GeneratorSpec& spec) {
  const std::size_t n_years = static_cast<std::size_t>(
      std::floor(spec.horizon_days / kDaysPerYear + 1e-9));
  std::vector<double> counts(n_years, 0.0);
  if (spec.params.lambda == 0.0) {
    return CitationHistory::from_yearly_counts(spec.paper_id, std::move(counts));
  }
  double prev = 0.0;
  double carry = 0.0;
  for (std::size_t i = 0; i < n_years; ++i) {
    const double boundary = static_cast<double>(i + 1) * kDaysPerYear;
    const double cum = cumulative_citations(spec.params, spec.globals, boundary);
    const double want = (cum - prev) + carry;
    const double n = std::max(0.0, std::floor(want + 0.5));
    carry = want - n;
    counts[i] = n;
    prev = cum;
  }
  return CitationHistory::from_yearly_counts(spec.paper_id, std::move(counts));
}

CitationHistory generate_stochastic(const GeneratorSpec& spec) {
  const double lambda = spec.params.lambda;
  const double mu = spec.params.mu;
  const double sigma = spec.params.sigma;
  const double m = spec.globals.m;

  std::vector<double> events;
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::exponential_distribution<double> exp1(1.0);

  // The aging kernel is unimodal with mode at exp(mu - sigma^2); past the
  // mode its own value at the current time bounds everything ahead.
  const double t_mode = std::exp(mu - sigma * sigma);
  const double p_mode = aging_density(t_mode, mu, sigma);
  if (!std::isfinite(p_mode)) {
    throw NumericError("generate: non-finite aging kernel envelope");
  }

  double t = 0.0;
  while (true) {
    const double scale = lambda * (static_cast<double>(events.size()) + m);
    const double p_sup = (t < t_mode) ? p_mode : aging_density(t, mu, sigma);
    const double bound = scale * p_sup;
    if (!std::isfinite(bound)) throw NumericError("generate: non-finite intensity");
    if (bound <= 0.0) break;
    t += exp1(rng) / bound;
    if (t >= spec.horizon_days) break;
    const double p_here = aging_density(t, mu, sigma);
    if (unif(rng) * p_sup <= p_here) {
      events.push_back(t);
    }
  }
  return CitationHistory::from_events(spec.paper_id, std::move(events));
}

}  // namespace

CitationHistory generate(const GeneratorSpec& spec) {
  spec.validate();
  return (spec.mode == GenerationMode::deterministic) ? generate_deterministic(spec)
                                                      : generate_stochastic(spec);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  // splitmix64
  std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::vector<CitationHistory> generate_cohort(std::size_t n, const ParamSampler& sampler,
                                             const GeneratorSpec& defaults,
                                             std::vector<WsbParams>* true_params) {
  if (n < 1) throw InputError("generate_cohort: n must be >= 1");
  std::vector<CitationHistory> cohort;
  cohort.reserve(n);
  if (true_params) {
    true_params->clear();
    true_params->reserve(n);
  }
  for (std::size_t i = 0; i < n; ++i) {
    GeneratorSpec spec = defaults;
    spec.seed = derive_seed(defaults.seed, i);
    if (sampler) {
      std::mt19937_64 param_rng(derive_seed(spec.seed, 0x5EED));
      spec.params = sampler(param_rng);
    }
    spec.paper_id = defaults.paper_id + "-" + std::to_string(i);
    if (true_params) true_params->push_back(spec.params);
    cohort.push_back(generate(spec));
  }
  return cohort;
}

ParamSampler uniform_param_sampler(double lambda_lo, double lambda_hi,
                                   double mu_lo, double mu_hi,
                                   double sigma_lo, double sigma_hi) {
  return [=](std::mt19937_64& rng) {
    std::uniform_real_distribution<double> dl(lambda_lo, lambda_hi);
    std::uniform_real_distribution<double> dm(mu_lo, mu_hi);
    std::uniform_real_distribution<double> ds(sigma_lo, sigma_hi);
    WsbParams p;
    p.lambda = dl(rng);
    p.mu = dm(rng);
    p.sigma = ds(rng);
    return p;
  };
}

}  // namespace citedyn
