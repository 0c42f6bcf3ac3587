#pragma once

#include <Eigen/Dense>
#include <array>
#include <span>
#include <vector>

#include "citedyn/history.hpp"
#include "citedyn/model_kind.hpp"
#include "citedyn/optim.hpp"
#include "citedyn/types.hpp"

namespace citedyn {

/// Space the least-squares residuals are taken in. All fits here use `log`
/// (residuals on ln(1 + c/m)); `linear` is reserved for raw-count residuals.
enum class ObjectiveSpace { log, linear };

/// Outcome of a least-squares fit of one curve family to one history.
struct FitResult {
  ModelKind kind = ModelKind::wsb;
  /// Parameter vector in the canonical layout for `kind` (see ModelKind).
  std::array<double, 3> params{};
  /// Gauss-Newton parameter covariance at the optimum, scaled by the
  /// residual variance. Symmetric positive semi-definite.
  Eigen::Matrix3d covariance = Eigen::Matrix3d::Zero();
  double residual_norm = 0.0;  ///< Euclidean norm of the residual vector
  std::size_t n_obs = 0;       ///< observations entering the objective
  bool converged = false;
  ObjectiveSpace objective_space = ObjectiveSpace::log;
  /// Objective value after each accepted optimizer step of the winning
  /// start; non-increasing by construction (audit trail).
  std::vector<double> descent;

  /// The parameters as WsbParams. Only meaningful for kind == wsb.
  WsbParams wsb_params() const;
  /// Asymptotic cumulative count implied by the fit: m(e^lambda - 1) for
  /// wsb, m*lambda for lognormal, S for the diffusion families.
  double saturation(const GlobalConstants& g) const;
};

struct FitOptions {
  /// Observation grids larger than this are thinned uniformly in log t.
  std::size_t max_observations = 512;
  LmOptions lm;
};

/// Fit the three-parameter mechanistic model by least squares on
/// ln(1 + c/m), multi-started over a coarse (mu, sigma) grid with lambda
/// seeded from the final observed count. Throws DegenerateHistoryError when
/// every count is zero and InsufficientDataError when fewer than 3 distinct
/// times have positive cumulative counts. If no start converges, the best
/// effort is returned with converged == false.
FitResult fit_wsb(const CitationHistory& h, const GlobalConstants& g,
                  const FitOptions& opts = {});

/// Fit one of the competing families (lognormal, logistic, bass, gompertz)
/// with the same objective space, multi-start protocol, and error contract
/// as fit_wsb. Throws InputError if kind is wsb (use fit_wsb).
FitResult fit_baseline(ModelKind kind, const CitationHistory& h,
                       const GlobalConstants& g, const FitOptions& opts = {});

/// Dispatch on kind over fit_wsb / fit_baseline.
FitResult fit_model(ModelKind kind, const CitationHistory& h, const GlobalConstants& g,
                    const FitOptions& opts = {});

/// The shared fitting core: least squares of `kind` against an explicit
/// cumulative observation grid (ascending times, t > 0). Used directly for
/// curves that never lived as a single paper's history, e.g. cohort means.
FitResult fit_observations(ModelKind kind, std::span<const Observation> grid,
                           const GlobalConstants& g, const FitOptions& opts = {});

/// Expected cumulative citations at t days under a fit's curve.
double model_cumulative(const FitResult& fit, const GlobalConstants& g, double t_days);

}  // namespace citedyn
