#include "citedyn/analytics.hpp"

#include <algorithm>
#include <cmath>

#include "citedyn/model.hpp"

namespace citedyn {

IfWindow::IfWindow()
    : m1_log_days(std::log(3.0 * kDaysPerYear)), m2_log_days(std::log(kDaysPerYear)) {}

IfWindow::IfWindow(double m1, double m2) : m1_log_days(m1), m2_log_days(m2) {
  validate();
}

void IfWindow::validate() const {
  if (!std::isfinite(m1_log_days) || !std::isfinite(m2_log_days)) {
    throw InputError("IfWindow: edges must be finite");
  }
  if (!(m1_log_days > m2_log_days)) {
    throw InputError("IfWindow: M1 must exceed M2");
  }
}

JournalProfile aggregate_journal(std::span<const CitationHistory> histories,
                                 std::span<const FitResult> fits,
                                 const GlobalConstants& g, const AggregateOptions& opts) {
  g.validate();
  opts.window.validate();
  if (histories.size() != fits.size()) {
    throw InputError("aggregate_journal: histories and fits must be parallel");
  }

  std::vector<std::size_t> selected;
  for (std::size_t i = 0; i < fits.size(); ++i) {
    if (fits[i].kind == ModelKind::wsb && fits[i].converged) selected.push_back(i);
  }
  if (selected.size() < opts.min_papers) {
    throw TooFewPapersError("aggregate_journal: need at least " +
                            std::to_string(opts.min_papers) + " converged fits, have " +
                            std::to_string(selected.size()));
  }

  // common yearly grid: every selected paper must cover every grid point
  std::size_t n_years = static_cast<std::size_t>(-1);
  for (std::size_t i : selected) {
    const auto years = static_cast<std::size_t>(
        std::floor(histories[i].last_time() / kDaysPerYear + 1e-9));
    n_years = std::min(n_years, years);
  }
  if (n_years == 0 || n_years == static_cast<std::size_t>(-1)) {
    throw InsufficientDataError("aggregate_journal: cohort has no complete year");
  }

  std::vector<Observation> mean_curve(n_years);
  for (std::size_t j = 0; j < n_years; ++j) {
    const double t = static_cast<double>(j + 1) * kDaysPerYear;
    double sum = 0.0;
    for (std::size_t i : selected) sum += histories[i].cumulative_at(t);
    mean_curve[j] = {t, sum / static_cast<double>(selected.size())};
  }

  const FitResult fit = fit_observations(ModelKind::wsb, mean_curve, g, opts.fit);

  JournalProfile profile;
  profile.journal_id = opts.journal_id;
  profile.cohort_year = opts.cohort_year;
  profile.Lambda = fit.params[0];
  profile.M = fit.params[1];
  profile.Sigma = fit.params[2];
  profile.C_infinity = ultimate_impact(profile.Lambda, g.m);
  profile.T_star_days = impact_time(profile.M);
  profile.n_papers = selected.size();
  profile.predicted_IF = impact_factor(profile, opts.window, g);
  return profile;
}

double impact_factor(const JournalProfile& profile, const IfWindow& window,
                     const GlobalConstants& g) {
  g.validate();
  window.validate();
  if (!(profile.Sigma > 0.0) || !std::isfinite(profile.Sigma) ||
      !std::isfinite(profile.Lambda) || !std::isfinite(profile.M) ||
      profile.Lambda < 0.0) {
    throw InputError("impact_factor: invalid journal profile parameters");
  }
  const double x1 = (window.m1_log_days - profile.M) / profile.Sigma;
  const double x2 = (window.m2_log_days - profile.M) / profile.Sigma;
  return 0.5 * g.m *
         (std::exp(profile.Lambda * phi(x1)) - std::exp(profile.Lambda * phi(x2)));
}

CohortSelector CohortSelector::fixed_lambda(double lambda0, double tol) {
  if (!std::isfinite(lambda0) || !(tol >= 0.0) || !std::isfinite(tol)) {
    throw InputError("CohortSelector: fixed_lambda needs finite lambda0 and tol >= 0");
  }
  CohortSelector s;
  s.mode = Mode::fixed_lambda;
  s.lambda0 = lambda0;
  s.lambda_tol = tol;
  return s;
}

CohortSelector CohortSelector::fixed_early(double c_lo, double c_hi) {
  if (!(c_lo <= c_hi) || !std::isfinite(c_lo) || !std::isfinite(c_hi)) {
    throw InputError("CohortSelector: fixed_early needs a finite range c_lo <= c_hi");
  }
  CohortSelector s;
  s.mode = Mode::fixed_early;
  s.early_lo = c_lo;
  s.early_hi = c_hi;
  return s;
}

std::vector<double> cohort_convergence(std::span<const CitationHistory> histories,
                                       std::span<const double> lambdas,
                                       const CohortSelector& selector,
                                       std::span<const double> times_days) {
  if (selector.mode == CohortSelector::Mode::fixed_lambda &&
      lambdas.size() != histories.size()) {
    throw InputError("cohort_convergence: fixed_lambda needs one lambda per history");
  }
  for (double t : times_days) {
    if (!(t > 0.0) || !std::isfinite(t)) {
      throw InputError("cohort_convergence: times must be positive and finite");
    }
  }

  std::vector<std::size_t> selected;
  for (std::size_t i = 0; i < histories.size(); ++i) {
    if (selector.mode == CohortSelector::Mode::fixed_lambda) {
      if (std::abs(lambdas[i] - selector.lambda0) <= selector.lambda_tol) {
        selected.push_back(i);
      }
    } else {
      const double c2 = histories[i].cumulative_at(years_to_days(2.0));
      if (c2 >= selector.early_lo && c2 <= selector.early_hi) selected.push_back(i);
    }
  }
  if (selected.size() < 20) {
    throw EmptySelectionError("cohort_convergence: selector matched " +
                              std::to_string(selected.size()) + " papers, need >= 20");
  }

  std::vector<double> cv;
  cv.reserve(times_days.size());
  const double n = static_cast<double>(selected.size());
  for (double t : times_days) {
    double sum = 0.0, sum2 = 0.0;
    for (std::size_t i : selected) {
      const double c = histories[i].cumulative_at(t);
      sum += c;
      sum2 += c * c;
    }
    const double mean = sum / n;
    if (mean == 0.0) {
      cv.push_back(0.0);
      continue;
    }
    const double var = std::max(0.0, (sum2 - n * mean * mean) / (n - 1.0));
    cv.push_back(std::sqrt(var) / mean);
  }
  return cv;
}

void HistogramSpec::validate() const {
  if (!(hi > lo) || !std::isfinite(lo) || !std::isfinite(hi)) {
    throw InputError("HistogramSpec: need finite lo < hi");
  }
  if (bins < 1) throw InputError("HistogramSpec: need at least one bin");
}

Histogram param_distribution(std::span<const FitResult> fits, WhichParam which,
                             const HistogramSpec& binning) {
  binning.validate();

  std::vector<double> values;
  for (const FitResult& f : fits) {
    if (!f.converged) continue;
    switch (which) {
      case WhichParam::lambda: values.push_back(f.params[0]); break;
      case WhichParam::mu: values.push_back(f.params[1]); break;
      case WhichParam::sigma: values.push_back(f.params[2]); break;
    }
  }
  if (values.empty()) {
    throw InputError("param_distribution: no converged fits");
  }

  Histogram h;
  h.n = values.size();
  h.edges.resize(binning.bins + 1);
  const double width = (binning.hi - binning.lo) / static_cast<double>(binning.bins);
  for (std::size_t i = 0; i <= binning.bins; ++i) {
    h.edges[i] = binning.lo + width * static_cast<double>(i);
  }
  h.mass.assign(binning.bins, 0.0);
  const double unit = 1.0 / static_cast<double>(values.size());
  double sum = 0.0;
  for (double v : values) {
    sum += v;
    auto bin = static_cast<long>(std::floor((v - binning.lo) / width));
    bin = std::clamp(bin, 0L, static_cast<long>(binning.bins) - 1L);
    h.mass[static_cast<std::size_t>(bin)] += unit;
  }
  h.sample_mean = sum / static_cast<double>(values.size());
  return h;
}

double weighted_ks(const CitationHistory& h, const FitResult& fitted,
                   const GlobalConstants& g) {
  g.validate();
  const auto grid = h.observation_grid();
  if (grid.size() < 2) {
    throw DegenerateSpanError("weighted_ks: need at least two observation times");
  }
  const double c_emp_max = grid.back().cumulative;
  if (!(c_emp_max > 0.0)) {
    throw DegenerateHistoryError("weighted_ks: history has no citations");
  }
  const double c_mod_max = model_cumulative(fitted, g, grid.back().t_days);
  if (!(c_mod_max > 0.0)) {
    throw NumericError("weighted_ks: fitted curve is zero over the observation span");
  }

  double stat = -1.0;
  for (const Observation& o : grid) {
    const double f_mod = model_cumulative(fitted, g, o.t_days) / c_mod_max;
    if (f_mod <= 0.0 || f_mod >= 1.0) continue;
    const double f_emp = o.cumulative / c_emp_max;
    stat = std::max(stat, std::abs(f_emp - f_mod) / std::sqrt(f_mod * (1.0 - f_mod)));
  }
  if (stat < 0.0) {
    throw DegenerateSpanError("weighted_ks: no observation with model CDF inside (0,1)");
  }
  return stat;
}

}  // namespace citedyn
