#pragma once

#include <span>
#include <string>
#include <vector>

#include "citedyn/fitting.hpp"
#include "citedyn/history.hpp"
#include "citedyn/types.hpp"

namespace citedyn {

/// Log-time citation census window for the impact-factor formula: citations
/// accrued between paper ages exp(m2_log_days) and exp(m1_log_days),
/// averaged over the two cohorts (hence the factor m/2). The default census
/// counts citations in a paper's second and third year, the classic
/// two-year impact factor geometry.
struct IfWindow {
  double m1_log_days = 0.0;  ///< log of the far edge, defaults to ln(3 years)
  double m2_log_days = 0.0;  ///< log of the near edge, defaults to ln(1 year)

  IfWindow();
  IfWindow(double m1, double m2);
  void validate() const;  ///< m1 > m2, both finite
};

/// Journal-year cohort summary: the journal-level analogs (Lambda, M, Sigma)
/// of the per-paper parameters, with the derived ultimate impact, impact
/// time, and predicted impact factor.
struct JournalProfile {
  std::string journal_id;
  int cohort_year = 0;
  double Lambda = 0.0;
  double M = 0.0;          ///< log-days
  double Sigma = 0.0;
  double C_infinity = 0.0; ///< m (e^Lambda - 1), exact
  double T_star_days = 0.0;///< e^M, exact
  double predicted_IF = 0.0;
  std::size_t n_papers = 0;
};

struct AggregateOptions {
  std::string journal_id = "journal";
  int cohort_year = 0;
  IfWindow window{};
  FitOptions fit{};
  std::size_t min_papers = 10;
};

/// Pool a journal-year cohort: average the per-paper cumulative curves on
/// their common yearly grid and fit the mechanistic model to the mean curve.
/// Only papers whose entry in `fits` is a converged wsb fit participate;
/// fewer than opts.min_papers such papers raises TooFewPapersError.
/// `fits` must parallel `histories`.
JournalProfile aggregate_journal(std::span<const CitationHistory> histories,
                                 std::span<const FitResult> fits,
                                 const GlobalConstants& g,
                                 const AggregateOptions& opts = {});

/// Predicted impact factor (m/2)(e^(Lambda Phi((M1-M)/Sigma)) - e^(Lambda Phi((M2-M)/Sigma))):
/// half the model-predicted citations a paper accrues between ages e^M2 and
/// e^M1. Strictly increasing in Lambda and M1, decreasing in M2.
double impact_factor(const JournalProfile& profile, const IfWindow& window,
                     const GlobalConstants& g);

/// Which papers belong to a convergence/divergence cohort (Fig. 2 style):
/// either papers sharing a fitness value, or papers sharing an early
/// citation count (cumulative citations at 2 years inside a band).
struct CohortSelector {
  enum class Mode { fixed_lambda, fixed_early };
  Mode mode = Mode::fixed_lambda;
  double lambda0 = 1.0;
  double lambda_tol = 0.0;
  double early_lo = 0.0;
  double early_hi = 0.0;

  static CohortSelector fixed_lambda(double lambda0, double tol);
  /// Papers with cumulative citations at 2 years in [c_lo, c_hi].
  static CohortSelector fixed_early(double c_lo, double c_hi);
};

/// Coefficient of variation sd(c)/mean(c) of cumulative citations across the
/// selected papers, one value per requested time. `lambdas` parallels
/// `histories` and is consulted only in fixed_lambda mode (pass the known or
/// fitted fitness per paper). Fewer than 20 selected papers raises
/// EmptySelectionError. A zero mean yields CV 0 at that time.
std::vector<double> cohort_convergence(std::span<const CitationHistory> histories,
                                       std::span<const double> lambdas,
                                       const CohortSelector& selector,
                                       std::span<const double> times_days);

enum class WhichParam { lambda, mu, sigma };

struct HistogramSpec {
  double lo = 0.0;
  double hi = 1.0;
  std::size_t bins = 20;
  void validate() const;  ///< hi > lo, bins >= 1
};

/// Normalized histogram: mass sums to 1; values outside [lo, hi] land in the
/// nearest edge bin. `sample_mean` is the exact mean of the included values
/// (not a binned approximation).
struct Histogram {
  std::vector<double> edges;  ///< bins + 1 ascending edges
  std::vector<double> mass;   ///< per-bin probability mass
  double sample_mean = 0.0;
  std::size_t n = 0;

  double mean() const { return sample_mean; }
};

/// Distribution of one fitted parameter over the converged fits in `fits`.
/// Throws InputError when no fit is converged.
Histogram param_distribution(std::span<const FitResult> fits, WhichParam which,
                             const HistogramSpec& binning);

/// Variance-weighted Kolmogorov-Smirnov distance between the observed and
/// fitted cumulative curves, both normalized by their value at the last
/// observation time:
///   max over observation times of |F_emp - F_mod| / sqrt(F_mod (1 - F_mod)),
/// excluding times where F_mod is exactly 0 or 1. Invariant under uniform
/// rescaling of all counts. Throws DegenerateSpanError when fewer than two
/// observation times exist (or none survive the exclusion) and
/// DegenerateHistoryError when the history has no citations.
double weighted_ks(const CitationHistory& h, const FitResult& fitted,
                   const GlobalConstants& g);

}  // namespace citedyn
