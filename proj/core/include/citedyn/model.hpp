#pragma once

#include <span>
#include <vector>

#include "citedyn/history.hpp"
#include "citedyn/types.hpp"

namespace citedyn {

/// Standard normal CDF, evaluated through the complementary error function.
/// Total: accepts +-infinity. Accurate to ~1e-15 including the tails.
double phi(double x);

/// Standard normal density.
double normal_pdf(double x);

/// Lognormal aging kernel 1/(sqrt(2 pi) sigma t) exp(-(ln t - mu)^2 / 2 sigma^2).
/// Density in 1/days; integrates to 1 over (0, inf).
/// Throws InputError for t <= 0 or sigma <= 0.
double aging_density(double t_days, double mu, double sigma);

/// Expected cumulative citations m (exp(lambda Phi((ln t - mu)/sigma)) - 1).
/// Defined at t = 0 as the limit 0. Non-decreasing in t.
double cumulative_citations(const WsbParams& p, const GlobalConstants& g, double t_days);

/// Instantaneous citation rate (citations/day), the time derivative of
/// cumulative_citations: m lambda exp(lambda Phi(x)) N(x) / (sigma t).
/// Equals lambda (c(t) + m) aging_density(t). Throws InputError for t <= 0.
double citation_rate(const WsbParams& p, const GlobalConstants& g, double t_days);

/// Total citations acquired over a paper's lifetime, m (e^lambda - 1).
/// Depends only on the fitness.
double ultimate_impact(double lambda, double m);

/// Time to reach the geometric mean of the final citation count, e^mu days.
/// Depends only on the immediacy.
double impact_time(double mu);

/// One observation mapped to the universal coordinates
/// t_tilde = (ln t - mu)/sigma, c_tilde = ln(1 + c/m)/lambda.
struct RescaledPoint {
  double t_tilde = 0.0;
  double c_tilde = 0.0;
};

/// Rescale a history's observation grid with its (fitted) parameters. For
/// data exactly on the model curve, c_tilde = phi(t_tilde) pointwise.
/// Throws InputError when lambda is 0 (c_tilde undefined) or when the history
/// has observations at t <= 0 only.
std::vector<RescaledPoint> rescale(const CitationHistory& h, const WsbParams& p,
                                   const GlobalConstants& g,
                                   std::size_t max_points = 512);

/// Collapse quality of a set of rescaled points: the root-mean-square of
/// c_tilde - phi(t_tilde). Zero for noiseless model data.
double collapse_dispersion(std::span<const RescaledPoint> points);

}  // namespace citedyn
