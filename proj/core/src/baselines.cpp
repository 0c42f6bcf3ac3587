#include "citedyn/baselines.hpp"

#include <cmath>

#include "citedyn/model.hpp"

namespace citedyn {

namespace {

bool finite(double v) { return std::isfinite(v); }

/// Numerically stable logistic sigmoid.
double sigm(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

}  // namespace

BaselineParams BaselineParams::logistic(double S, double k, double t0) {
  BaselineParams p;
  p.kind = ModelKind::logistic;
  p.saturation = S;
  p.shape = {k, t0};
  p.validate();
  return p;
}

BaselineParams BaselineParams::bass(double S, double pp, double q) {
  BaselineParams p;
  p.kind = ModelKind::bass;
  p.saturation = S;
  p.shape = {pp, q};
  p.validate();
  return p;
}

BaselineParams BaselineParams::gompertz(double S, double b, double k) {
  BaselineParams p;
  p.kind = ModelKind::gompertz;
  p.saturation = S;
  p.shape = {b, k};
  p.validate();
  return p;
}

BaselineParams BaselineParams::lognormal(double lambda, double mu, double sigma,
                                         const GlobalConstants& g) {
  g.validate();
  BaselineParams p;
  p.kind = ModelKind::lognormal;
  p.saturation = g.m * lambda;
  p.shape = {lambda, mu, sigma};
  p.validate();
  return p;
}

void BaselineParams::validate() const {
  if (!(saturation > 0.0) || !finite(saturation)) {
    throw InputError("BaselineParams: saturation must be positive and finite");
  }
  for (double v : shape) {
    if (!finite(v)) throw InputError("BaselineParams: shape parameters must be finite");
  }
  switch (kind) {
    case ModelKind::logistic:
      if (shape.size() != 2) throw InputError("BaselineParams: logistic expects (k, t0)");
      if (!(shape[0] > 0.0)) throw InputError("BaselineParams: logistic rate k must be > 0");
      break;
    case ModelKind::bass:
      if (shape.size() != 2) throw InputError("BaselineParams: bass expects (p, q)");
      if (!(shape[0] > 0.0) || !(shape[1] > 0.0)) {
        throw InputError("BaselineParams: bass rates p and q must be > 0");
      }
      break;
    case ModelKind::gompertz:
      if (shape.size() != 2) throw InputError("BaselineParams: gompertz expects (b, k)");
      if (!(shape[0] > 0.0) || !(shape[1] > 0.0)) {
        throw InputError("BaselineParams: gompertz b and k must be > 0");
      }
      break;
    case ModelKind::lognormal:
      if (shape.size() != 3) {
        throw InputError("BaselineParams: lognormal expects (lambda, mu, sigma)");
      }
      if (!(shape[0] > 0.0)) throw InputError("BaselineParams: lognormal lambda must be > 0");
      if (!(shape[2] > 0.0)) throw InputError("BaselineParams: lognormal sigma must be > 0");
      break;
    case ModelKind::wsb:
      throw InputError("BaselineParams: wsb is not a baseline family");
  }
}

double baseline_curve(const BaselineParams& p, double t) {
  p.validate();
  if (!(t >= 0.0) || !finite(t)) {
    throw InputError("baseline_curve: t must be >= 0 and finite");
  }
  GlobalConstants g;
  std::array<double, 3> theta{};
  if (p.kind == ModelKind::lognormal) {
    g.m = p.saturation / p.shape[0];
    theta = {p.shape[0], p.shape[1], p.shape[2]};
  } else {
    theta = {p.saturation, p.shape[0], p.shape[1]};
  }
  return model_curve(p.kind, theta, g, t);
}

double model_curve(ModelKind kind, const std::array<double, 3>& theta,
                   const GlobalConstants& g, double t, std::array<double, 3>* grad) {
  if (grad) grad->fill(0.0);
  if (t <= 0.0) return 0.0;  // all families are anchored at c(0) = 0

  switch (kind) {
    case ModelKind::wsb: {
      const double lambda = theta[0], mu = theta[1], sigma = theta[2];
      const double x = (std::log(t) - mu) / sigma;
      const double P = phi(x);
      const double E = std::exp(lambda * P);  // (m + c)/m
      const double c = g.m * std::expm1(lambda * P);
      if (grad) {
        const double pdf = normal_pdf(x);
        (*grad)[0] = g.m * E * P;
        (*grad)[1] = -g.m * E * lambda * pdf / sigma;
        (*grad)[2] = -g.m * E * lambda * pdf * x / sigma;
      }
      return c;
    }
    case ModelKind::lognormal: {
      const double lambda = theta[0], mu = theta[1], sigma = theta[2];
      const double x = (std::log(t) - mu) / sigma;
      const double P = phi(x);
      if (grad) {
        const double pdf = normal_pdf(x);
        (*grad)[0] = g.m * P;
        (*grad)[1] = -g.m * lambda * pdf / sigma;
        (*grad)[2] = -g.m * lambda * pdf * x / sigma;
      }
      return g.m * lambda * P;
    }
    case ModelKind::logistic: {
      const double S = theta[0], k = theta[1], t0 = theta[2];
      const double gg = sigm(k * (t - t0));
      const double g0 = sigm(-k * t0);
      const double D = sigm(k * t0);  // 1 - g0, computed without cancellation
      if (!(D > 1e-300) || !finite(D)) {
        throw NumericError("logistic curve saturated before publication (t0 too negative)");
      }
      const double N = gg - g0;
      const double C = S * N / D;
      if (grad) {
        const double gp = gg * (1.0 - gg);    // sigmoid slope at t
        const double g0p = g0 * (1.0 - g0);   // sigmoid slope at 0
        const double dg_dk = gp * (t - t0);
        const double dg0_dk = -t0 * g0p;
        const double dg_dt0 = -k * gp;
        const double dg0_dt0 = -k * g0p;
        (*grad)[0] = N / D;
        (*grad)[1] = S * ((dg_dk - dg0_dk) * D + N * dg0_dk) / (D * D);
        (*grad)[2] = S * ((dg_dt0 - dg0_dt0) * D + N * dg0_dt0) / (D * D);
      }
      return C;
    }
    case ModelKind::bass: {
      const double S = theta[0], p = theta[1], q = theta[2];
      const double E = std::exp(-(p + q) * t);
      const double rho = q / p;
      const double D = 1.0 + rho * E;
      const double N = 1.0 - E;
      const double C = S * N / D;
      if (grad) {
        const double D2 = D * D;
        (*grad)[0] = N / D;
        (*grad)[1] = S * (1.0 + rho) * t * E / D2 + S * E * N * q / (p * p * D2);
        (*grad)[2] = S * (1.0 + rho) * t * E / D2 - S * E * N / (p * D2);
      }
      return C;
    }
    case ModelKind::gompertz: {
      const double S = theta[0], b = theta[1], k = theta[2];
      const double w = std::exp(-k * t);
      const double h = std::exp(-b * w);
      const double h0 = std::exp(-b);
      const double D = -std::expm1(-b);  // 1 - h0, stable for small b
      const double N = h - h0;
      const double C = S * N / D;
      if (grad) {
        const double dh_db = -w * h;
        const double dh0_db = -h0;
        const double dh_dk = h * b * t * w;
        (*grad)[0] = N / D;
        (*grad)[1] = S * ((dh_db - dh0_db) * D + N * dh0_db) / (D * D);
        (*grad)[2] = S * dh_dk / D;
      }
      return C;
    }
  }
  throw InputError("model_curve: unknown model kind");
}

double lognormal_equivalence_lambda(double tolerance, const GlobalConstants& g) {
  g.validate();
  if (!(tolerance > 0.0) || !(tolerance < 1.0)) {
    throw InputError("lognormal_equivalence_lambda: tolerance must lie in (0, 1)");
  }
  // The relative deviation sup over Phi in [0,1] of
  //   (e^(lambda Phi) - 1 - lambda Phi) / (e^(lambda Phi) - 1)
  // is attained at Phi = 1 because u / (e^u - 1) is decreasing in u, giving
  //   dev(lambda) = 1 - lambda / (e^lambda - 1),
  // which rises monotonically from 0 to 1. Bisect for dev(lambda) = tolerance.
  const auto dev = [](double lambda) { return 1.0 - lambda / std::expm1(lambda); };
  double lo = 1e-12, hi = 200.0;
  for (int i = 0; i < 200 && (hi - lo) > 1e-15 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (dev(mid) <= tolerance ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace citedyn
