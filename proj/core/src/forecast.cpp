#include "citedyn/forecast.hpp"

#include <algorithm>
#include <cmath>

#include "citedyn/baselines.hpp"

namespace citedyn {

namespace {
constexpr double kExactHitLogEps = 1e-6;
}

PredictionEnvelope predict(const CitationHistory& h_train, const GlobalConstants& g,
                           std::vector<double> eval_times_days, ModelKind kind,
                           const FitOptions& opts) {
  g.validate();
  for (double t : eval_times_days) {
    if (!(t >= 0.0) || !std::isfinite(t)) {
      throw InputError("predict: eval times must be >= 0 and finite");
    }
  }

  PredictionEnvelope env;
  env.paper_id = h_train.paper_id();
  env.train_horizon_days = h_train.last_time();
  env.fit = fit_model(kind, h_train, g, opts);
  if (!env.fit.converged) {
    throw NumericError("predict: prefix fit did not converge; envelope undefined");
  }

  const std::size_t n = eval_times_days.size();
  env.eval_times_days = std::move(eval_times_days);
  env.most_likely.resize(n);
  env.band_low.resize(n);
  env.band_high.resize(n);
  env.sigma_log.resize(n);

  for (std::size_t i = 0; i < n; ++i) {
    const double t = env.eval_times_days[i];
    std::array<double, 3> grad{};
    const double c = model_curve(kind, env.fit.params, g, t, &grad);
    Eigen::Vector3d glog(grad[0], grad[1], grad[2]);
    glog /= (g.m + c);
    const double var = glog.dot(env.fit.covariance * glog);
    const double s = std::sqrt(std::max(var, 0.0));
    const double log_center = std::log(g.m + c);
    env.most_likely[i] = c;
    env.sigma_log[i] = s;
    env.band_low[i] = std::exp(log_center - s) - g.m;
    env.band_high[i] = std::exp(log_center + s) - g.m;
  }
  return env;
}

ZScoreReport z_score(const PredictionEnvelope& env, const CitationHistory& h_full,
                     double horizon_days, const GlobalConstants& g) {
  g.validate();
  if (!(horizon_days > 0.0) || !std::isfinite(horizon_days)) {
    throw InputError("z_score: horizon must be positive and finite");
  }

  const double tol = 1e-6 * std::max(1.0, horizon_days);
  std::size_t idx = env.eval_times_days.size();
  for (std::size_t i = 0; i < env.eval_times_days.size(); ++i) {
    if (std::abs(env.eval_times_days[i] - horizon_days) <= tol) {
      idx = i;
      break;
    }
  }
  if (idx == env.eval_times_days.size()) {
    throw InputError("z_score: horizon is not among the envelope's eval times");
  }
  if (h_full.last_time() + tol < horizon_days) {
    throw InputError("z_score: the true history does not extend to the horizon");
  }

  const double c_true = h_full.cumulative_at(horizon_days);
  const double diff = std::log(g.m + c_true) - std::log(g.m + env.most_likely[idx]);
  const double s = env.sigma_log[idx];

  ZScoreReport report;
  report.paper_id = h_full.paper_id().empty() ? env.paper_id : h_full.paper_id();
  report.horizon_days = horizon_days;
  if (std::abs(diff) <= kExactHitLogEps) {
    report.z_at_horizon = 0.0;
  } else if (s > 0.0) {
    report.z_at_horizon = diff / s;
  } else {
    throw UndefinedSigmaError("z_score: sigma_log is zero with a nonzero residual");
  }
  report.within_2 = std::abs(report.z_at_horizon) <= 2.0;
  return report;
}

double SurvivalCurve::survival(double z) const {
  // exceedance[i] = P(|Z| > thresholds[i]); between thresholds the step
  // function holds the value of the largest threshold <= z
  if (thresholds.empty()) return 0.0;
  auto it = std::upper_bound(thresholds.begin(), thresholds.end(), z);
  if (it == thresholds.begin()) return 1.0;  // z below every observed |z|
  const auto i = static_cast<std::size_t>(std::distance(thresholds.begin(), it)) - 1;
  return exceedance[i];
}

SurvivalCurve cohort_accuracy(std::span<const ZScoreReport> cohort) {
  if (cohort.empty()) throw InputError("cohort_accuracy: empty cohort");

  std::vector<double> mags;
  mags.reserve(cohort.size());
  for (const ZScoreReport& r : cohort) mags.push_back(std::abs(r.z_at_horizon));
  std::sort(mags.begin(), mags.end());

  SurvivalCurve curve;
  curve.n = mags.size();
  const double n = static_cast<double>(mags.size());
  for (std::size_t i = 0; i < mags.size(); ++i) {
    if (i + 1 < mags.size() && mags[i + 1] == mags[i]) continue;  // keep last duplicate
    curve.thresholds.push_back(mags[i]);
    curve.exceedance.push_back(static_cast<double>(mags.size() - (i + 1)) / n);
  }
  std::size_t within1 = 0, within2 = 0;
  for (double m : mags) {
    if (m <= 1.0) ++within1;
    if (m <= 2.0) ++within2;
  }
  curve.fraction_within_1 = static_cast<double>(within1) / n;
  curve.fraction_within_2 = static_cast<double>(within2) / n;
  return curve;
}

}  // namespace citedyn
