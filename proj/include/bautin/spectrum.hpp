#pragma once

// Roots of the characteristic quasi-polynomial h(lambda) = lambda - a e^{-lambda r}
// of the linearization x' = a x(t - r).

#include "bautin/constants.hpp"

namespace bautin::spectrum {

struct ModelParams {
  double a = kGainAtHopf;  // delayed-feedback gain
  double c = 0.0;          // mixed quadratic coefficient
  double r = kDelay;       // delay, > 0
};

// Operating window of the implicit branch y(a) through (a, y) = (-1, 0).
inline constexpr double kBranchMin = -1.5;
inline constexpr double kBranchMax = -0.5;

inline constexpr double kRootResidualTol = 1e-10;
inline constexpr double kContourMinModulus = 1e-8;
// Certification abscissa used throughout: all non-leading roots lie left of it.
inline constexpr double kGapAbscissa = -0.125;

struct LeadingPair {
  double mu = 0.0;
  double omega = 0.0;  // > 0 representative
  cplx root() const { return {mu, omega}; }
};

struct Box {
  double re_min = 0.0;
  double re_max = 0.0;
  double im_min = 0.0;
  double im_max = 0.0;
};

struct RootCount {
  int count = 0;
  double sigma = 0.0;  // abscissa actually used, after any contour perturbation
  Box box;
};

struct SpectrumSummary {
  double mu = 0.0;
  double omega = 0.0;
  double mu_prime = 0.0;
  int right_count = 0;
  double sigma = 0.0;
  Box box;
};

cplx char_fn(cplx lambda, const ModelParams& params);

// Newton on G(a, y) = cos sqrt(a^2 r^2 e^{-2y} - y^2) - (y/(a r)) e^y from y = 0,
// mu = y / r, omega = sqrt(a^2 e^{-2 mu r} - mu^2), then one Newton polish on h.
LeadingPair leading_pair(const ModelParams& params);

// d mu / d a along the branch, by implicit differentiation of G.
double mu_derivative(double a, double r);

// Roots of h with Re lambda > sigma (with multiplicity), certified by the
// argument principle on a box that encloses every such root.
RootCount count_roots_right_of(double sigma, const ModelParams& params);

SpectrumSummary summarize(const ModelParams& params, double sigma = kGapAbscissa);

// Gain a on the branch with mu(a) = target_mu.
double gain_for_mu(double target_mu, double r = kDelay);

}  // namespace bautin::spectrum
