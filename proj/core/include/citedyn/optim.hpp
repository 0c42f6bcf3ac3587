#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "citedyn/types.hpp"

namespace citedyn {

/// Evaluate residuals (and optionally the Jacobian) at x. Implementations
/// must resize `r` to the residual count and, when `jac` is non-null, fill
/// it as an (n_residuals x n_params) matrix. A null `jac` marks a probe
/// evaluation where only the objective is needed.
using ResidualFn =
    std::function<void(const Eigen::VectorXd& x, Eigen::VectorXd& r, Eigen::MatrixXd* jac)>;

struct LmOptions {
  int max_iterations = 600;    ///< outer iterations (accepted or not)
  int max_inner = 30;          ///< damping retries per outer iteration
  double initial_damping = 1e-3;
  double objective_tol = 1e-12;  ///< relative decrease per accepted step
  double absolute_tol = 1e-24;   ///< objective below this is a solved problem
  double step_tol = 1e-10;       ///< relative step size
  double gradient_tol = 1e-10;   ///< infinity norm of the projected J^T r
  /// Stop when `relative_streak` consecutive accepted steps each shrink the
  /// objective by no more than `relative_tol` of its value. Catches shallow
  /// valleys (typically along an active box bound) where strict tolerances
  /// would crawl for thousands of iterations after the curve has stabilized.
  double relative_tol = 1e-6;
  int relative_streak = 3;
};

struct LmResult {
  Eigen::VectorXd x;           ///< best point found (always inside the box)
  double objective = 0.0;      ///< sum of squared residuals at x
  bool converged = false;
  int iterations = 0;          ///< outer iterations consumed
  std::vector<double> descent; ///< objective after each accepted step; non-increasing
  Eigen::MatrixXd jtj;         ///< J^T J at x, for covariance estimation
  Eigen::Index n_residuals = 0;
};

/// Box-constrained Levenberg-Marquardt for nonlinear least squares.
///
/// Minimizes ||r(x)||^2 over lower <= x <= upper. Steps solve the damped
/// normal equations with Marquardt diagonal scaling and are projected onto
/// the box before evaluation; a step is accepted only if the objective does
/// not increase, so `descent` is non-increasing by construction. Throws
/// InputError for inconsistent bounds and NumericError when the objective is
/// not finite at the (projected) starting point.
LmResult lm_minimize(const ResidualFn& fn, Eigen::VectorXd x0,
                     const Eigen::VectorXd& lower, const Eigen::VectorXd& upper,
                     const LmOptions& opts = {});

/// Moore-Penrose pseudoinverse of a symmetric positive semidefinite matrix,
/// via eigendecomposition with relative tolerance on the spectrum.
Eigen::MatrixXd pseudo_inverse_psd(const Eigen::MatrixXd& a, double rel_tol = 1e-12);

}  // namespace citedyn
