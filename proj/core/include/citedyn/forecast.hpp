#pragma once

#include <span>
#include <string>
#include <vector>

#include "citedyn/fitting.hpp"
#include "citedyn/history.hpp"
#include "citedyn/types.hpp"

namespace citedyn {

/// A fitted curve extrapolated over eval times, with a one-standard-deviation
/// uncertainty band in log-citation space. band = exp(ln(m+c) +- sigma_log) - m,
/// so a true value lying exactly on band_high has z = +1 by construction.
struct PredictionEnvelope {
  std::string paper_id;
  double train_horizon_days = 0.0;
  std::vector<double> eval_times_days;
  std::vector<double> most_likely;  ///< fitted cumulative citations per eval time
  std::vector<double> band_low;     ///< z = -1 bound (may go below 0; not clamped)
  std::vector<double> band_high;    ///< z = +1 bound
  std::vector<double> sigma_log;    ///< sd of ln(m + c), delta method
  FitResult fit;
};

/// Signed prediction error at one horizon, in units of the envelope's
/// log-space standard deviation.
struct ZScoreReport {
  std::string paper_id;
  double z_at_horizon = 0.0;
  double horizon_days = 0.0;
  bool within_2 = true;  ///< |z| <= 2
};

/// Fit `kind` to the training prefix and extrapolate with uncertainty.
/// sigma_log(t) = sqrt(grad^T Cov grad) where grad is the gradient of
/// ln(m + c(t; theta)) at the fitted parameters. Propagates fit errors and
/// throws NumericError when the prefix fit did not converge (the envelope
/// is undefined in that case).
PredictionEnvelope predict(const CitationHistory& h_train, const GlobalConstants& g,
                           std::vector<double> eval_times_days,
                           ModelKind kind = ModelKind::wsb, const FitOptions& opts = {});

/// z at `horizon_days`, which must match one of the envelope's eval times:
/// z = (ln(m + c_true) - ln(m + most_likely)) / sigma_log. A log-space
/// discrepancy within 1e-6 counts as an exact hit (z = 0) regardless of
/// sigma_log; otherwise sigma_log = 0 raises UndefinedSigmaError. The true
/// history must extend to the horizon.
ZScoreReport z_score(const PredictionEnvelope& env, const CitationHistory& h_full,
                     double horizon_days, const GlobalConstants& g);

/// Empirical complementary CDF of |z| over a cohort.
struct SurvivalCurve {
  std::vector<double> thresholds;  ///< distinct |z| values, ascending
  std::vector<double> exceedance;  ///< P(|Z| > thresholds[i])
  double fraction_within_1 = 0.0;  ///< P(|Z| <= 1)
  double fraction_within_2 = 0.0;  ///< P(|Z| <= 2)
  std::size_t n = 0;

  /// P(|Z| > z) with right-continuous steps; 0 beyond the largest |z|.
  double survival(double z) const;
};

/// Cohort-level predictive accuracy (the complementary cumulative
/// distribution of |z| plus its headline fractions). Throws InputError on an
/// empty cohort.
SurvivalCurve cohort_accuracy(std::span<const ZScoreReport> cohort);

}  // namespace citedyn
