#pragma once

#include <array>
#include <vector>

#include "citedyn/model_kind.hpp"
#include "citedyn/types.hpp"

namespace citedyn {

/// Parameters of one of the competing growth-curve families. `shape` holds
/// the model-specific parameters in the canonical order (see ModelKind);
/// `saturation` is the asymptotic cumulative count S. For the lognormal
/// family S is not free — it equals m*lambda — so the factory derives it.
struct BaselineParams {
  ModelKind kind = ModelKind::logistic;
  double saturation = 1.0;
  std::vector<double> shape;

  static BaselineParams logistic(double S, double k, double t0);
  static BaselineParams bass(double S, double p, double q);
  static BaselineParams gompertz(double S, double b, double k);
  static BaselineParams lognormal(double lambda, double mu, double sigma,
                                  const GlobalConstants& g);

  void validate() const;
};

/// Expected cumulative citations of a baseline family at t days after
/// publication. All four families are anchored so the curve is exactly 0 at
/// t = 0 and approaches `saturation` as t grows. Throws InputError for t < 0
/// or invalid parameters, NumericError if the anchoring denominator
/// degenerates (a logistic already saturated before publication).
double baseline_curve(const BaselineParams& p, double t);

/// Unified curve evaluator over the canonical 3-parameter vector for any
/// kind, including wsb. Returns the expected cumulative count at t days and,
/// when `grad` is non-null, fills it with the partial derivatives with
/// respect to theta in canonical order. This is the single source of curve
/// math for fitting and prediction envelopes. Parameters are trusted (no
/// validation) so optimizer inner loops stay cheap; t must be >= 0.
double model_curve(ModelKind kind, const std::array<double, 3>& theta,
                   const GlobalConstants& g, double t,
                   std::array<double, 3>* grad = nullptr);

/// The largest lambda for which the full model is numerically
/// indistinguishable from its lognormal linearization: the worst-case
/// relative deviation sup over Phi in [0,1] of
///   [(e^(lambda*Phi) - 1) - lambda*Phi] / (e^(lambda*Phi) - 1)
/// stays within `tolerance`. Strictly increasing in tolerance, and tends to
/// 0 as tolerance does. Throws InputError unless tolerance is in (0,1).
double lognormal_equivalence_lambda(double tolerance, const GlobalConstants& g);

}  // namespace citedyn
