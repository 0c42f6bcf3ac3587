#include "citedyn/model.hpp"

#include <algorithm>
#include <cmath>

namespace citedyn {

namespace {
constexpr double kInvSqrt2 = 0.7071067811865475244;
constexpr double kInvSqrt2Pi = 0.3989422804014326779;
}  // namespace

double phi(double x) {
  if (std::isnan(x)) return x;
  // erfc keeps full relative accuracy in the left tail where
  // 0.5*(1+erf(x/sqrt(2))) would cancel.
  return 0.5 * std::erfc(-x * kInvSqrt2);
}

double normal_pdf(double x) {
  return kInvSqrt2Pi * std::exp(-0.5 * x * x);
}

double aging_density(double t_days, double mu, double sigma) {
  if (!(t_days > 0.0)) throw InputError("aging_density: t must be > 0");
  if (!(sigma > 0.0)) throw InputError("aging_density: sigma must be > 0");
  const double x = (std::log(t_days) - mu) / sigma;
  return normal_pdf(x) / (sigma * t_days);
}

double cumulative_citations(const WsbParams& p, const GlobalConstants& g, double t_days) {
  p.validate();
  g.validate();
  if (!(t_days >= 0.0)) throw InputError("cumulative_citations: t must be >= 0");
  if (t_days == 0.0) return 0.0;  // Phi(-inf) limit
  const double x = (std::log(t_days) - p.mu) / p.sigma;
  return g.m * std::expm1(p.lambda * phi(x));
}

double citation_rate(const WsbParams& p, const GlobalConstants& g, double t_days) {
  p.validate();
  g.validate();
  if (!(t_days > 0.0)) throw InputError("citation_rate: t must be > 0");
  const double x = (std::log(t_days) - p.mu) / p.sigma;
  return g.m * p.lambda * std::exp(p.lambda * phi(x)) * normal_pdf(x) / (p.sigma * t_days);
}

double ultimate_impact(double lambda, double m) {
  if (!(lambda >= 0.0)) throw InputError("ultimate_impact: lambda must be >= 0");
  if (!(m > 0.0)) throw InputError("ultimate_impact: m must be > 0");
  return m * std::expm1(lambda);
}

double impact_time(double mu) {
  return std::exp(mu);
}

std::vector<RescaledPoint> rescale(const CitationHistory& h, const WsbParams& p,
                                   const GlobalConstants& g, std::size_t max_points) {
  p.validate();
  g.validate();
  if (p.lambda == 0.0) throw InputError("rescale: lambda = 0 leaves c_tilde undefined");

  const auto grid = h.observation_grid(max_points);
  if (grid.empty()) {
    throw InputError("rescale: history has no observations at t > 0");
  }
  std::vector<RescaledPoint> out;
  out.reserve(grid.size());
  for (const auto& obs : grid) {
    RescaledPoint pt;
    pt.t_tilde = (std::log(obs.t_days) - p.mu) / p.sigma;
    pt.c_tilde = std::log1p(obs.cumulative / g.m) / p.lambda;
    out.push_back(pt);
  }
  return out;
}

double collapse_dispersion(std::span<const RescaledPoint> points) {
  if (points.empty()) return 0.0;
  double ss = 0.0;
  for (const auto& pt : points) {
    const double d = pt.c_tilde - phi(pt.t_tilde);
    ss += d * d;
  }
  return std::sqrt(ss / static_cast<double>(points.size()));
}

}  // namespace citedyn
