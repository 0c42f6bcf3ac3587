#include "citedyn/optim.hpp"

#include <algorithm>
#include <cmath>

namespace citedyn {

namespace {

Eigen::VectorXd clamp_to_box(const Eigen::VectorXd& x, const Eigen::VectorXd& lo,
                             const Eigen::VectorXd& hi) {
  return x.cwiseMax(lo).cwiseMin(hi);
}

}  // namespace

LmResult lm_minimize(const ResidualFn& fn, Eigen::VectorXd x0,
                     const Eigen::VectorXd& lower, const Eigen::VectorXd& upper,
                     const LmOptions& opts) {
  const Eigen::Index p = x0.size();
  if (lower.size() != p || upper.size() != p) {
    throw InputError("lm_minimize: bound dimensions do not match x0");
  }
  for (Eigen::Index i = 0; i < p; ++i) {
    if (!(lower[i] <= upper[i])) {
      throw InputError("lm_minimize: lower bound exceeds upper bound");
    }
  }

  LmResult res;
  res.x = clamp_to_box(x0, lower, upper);

  Eigen::VectorXd r;
  Eigen::MatrixXd jac;
  fn(res.x, r, &jac);
  res.n_residuals = r.size();
  double obj = r.squaredNorm();
  if (!std::isfinite(obj)) {
    throw NumericError("lm_minimize: objective not finite at starting point");
  }
  res.descent.push_back(obj);

  double damping = opts.initial_damping;
  int small_decrease_streak = 0;

  for (int iter = 0; iter < opts.max_iterations; ++iter) {
    res.iterations = iter + 1;

    const Eigen::VectorXd grad = jac.transpose() * r;
    // Components pushing through an active bound cannot be exploited: a
    // bound-pinned optimum is stationary in the projected gradient only.
    Eigen::VectorXd grad_proj = grad;
    for (Eigen::Index i = 0; i < p; ++i) {
      if ((res.x[i] <= lower[i] && grad[i] > 0.0) ||
          (res.x[i] >= upper[i] && grad[i] < 0.0)) {
        grad_proj[i] = 0.0;
      }
    }
    if (grad_proj.lpNorm<Eigen::Infinity>() <= opts.gradient_tol) {
      res.converged = true;
      break;
    }
    if (obj <= opts.absolute_tol) {
      res.converged = true;
      break;
    }

    const Eigen::MatrixXd jtj = jac.transpose() * jac;
    Eigen::VectorXd scale = jtj.diagonal().cwiseMax(1e-12);

    bool accepted = false;
    bool stalled = false;
    for (int inner = 0; inner < opts.max_inner; ++inner) {
      Eigen::MatrixXd a = jtj;
      a.diagonal() += damping * scale;
      const Eigen::VectorXd delta = a.ldlt().solve(-grad);
      const Eigen::VectorXd trial = clamp_to_box(res.x + delta, lower, upper);
      const Eigen::VectorXd step = trial - res.x;

      if (step.norm() <= opts.step_tol * (res.x.norm() + opts.step_tol)) {
        // the best step we can propose no longer moves the point
        res.converged = true;
        stalled = true;
        break;
      }

      Eigen::VectorXd r_trial;
      fn(trial, r_trial, nullptr);
      const double obj_trial = r_trial.squaredNorm();

      if (std::isfinite(obj_trial) && obj_trial <= obj) {
        const double decrease = obj - obj_trial;
        res.x = trial;
        fn(res.x, r, &jac);
        obj = r.squaredNorm();
        res.descent.push_back(obj);
        damping = std::max(damping / 3.0, 1e-12);
        accepted = true;
        if (decrease <= opts.objective_tol * std::max(obj, 1.0) ||
            obj <= opts.absolute_tol) {
          res.converged = true;
          stalled = true;
        }
        small_decrease_streak =
            decrease <= opts.relative_tol * std::max(obj, 1e-300)
                ? small_decrease_streak + 1
                : 0;
        if (small_decrease_streak >= opts.relative_streak) {
          res.converged = true;
          stalled = true;
        }
        break;
      }
      damping = std::min(damping * 4.0, 1e14);
    }

    if (stalled || !accepted) break;
  }

  res.objective = obj;
  res.jtj = jac.transpose() * jac;
  return res;
}

Eigen::MatrixXd pseudo_inverse_psd(const Eigen::MatrixXd& a, double rel_tol) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
  if (es.info() != Eigen::Success) {
    throw NumericError("pseudo_inverse_psd: eigendecomposition failed");
  }
  const Eigen::VectorXd& vals = es.eigenvalues();
  const double cutoff = rel_tol * std::max(vals.cwiseAbs().maxCoeff(), 0.0);
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(vals.size());
  for (Eigen::Index i = 0; i < vals.size(); ++i) {
    if (vals[i] > cutoff && vals[i] > 0.0) inv[i] = 1.0 / vals[i];
  }
  return es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().transpose();
}

}  // namespace citedyn
