#include "bautin/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "bautin/error.hpp"

namespace bautin::spectrum {

namespace {

struct BranchTerms {
  double disc;   // a^2 r^2 e^{-2y} - y^2
  double root;   // sqrt(disc)
};

BranchTerms branch_terms(double a, double r, double y) {
  const double disc = a * a * r * r * std::exp(-2.0 * y) - y * y;
  if (!(disc > 0.0)) {
    std::ostringstream msg;
    msg << "leading_pair: negative discriminant at a = " << a << ", y = " << y;
    throw NumericError(msg.str());
  }
  return {disc, std::sqrt(disc)};
}

double branch_g(double a, double r, double y) {
  const auto t = branch_terms(a, r, y);
  return std::cos(t.root) - y / (a * r) * std::exp(y);
}

double branch_dg_dy(double a, double r, double y) {
  const auto t = branch_terms(a, r, y);
  return (a * a * r * r * std::exp(-2.0 * y) + y) / t.root * std::sin(t.root) -
         (y + 1.0) / (a * r) * std::exp(y);
}

double branch_dg_da(double a, double r, double y) {
  const auto t = branch_terms(a, r, y);
  return -std::sin(t.root) * a * r * r * std::exp(-2.0 * y) / t.root + y / (a * a * r) * std::exp(y);
}

void check_params(const ModelParams& p) {
  if (!(p.r > 0.0)) throw DomainError("spectrum: delay r must be positive");
  if (p.a == 0.0) throw DomainError("spectrum: gain a must be nonzero");
}

void check_window(double a) {
  if (a < kBranchMin || a > kBranchMax) {
    std::ostringstream msg;
    msg << "leading_pair: a = " << a << " outside the branch window [" << kBranchMin << ", "
        << kBranchMax << "]";
    throw DomainError(msg.str());
  }
}

double solve_branch(double a, double r) {
  double y = 0.0;
  for (int it = 0; it < 50; ++it) {
    const double g = branch_g(a, r, y);
    if (std::abs(g) <= 1e-15) return y;
    const double dg = branch_dg_dy(a, r, y);
    if (dg == 0.0) throw NumericError("leading_pair: dG/dy vanished");
    const double step = g / dg;
    y -= step;
    if (std::abs(step) <= 1e-16 * std::max(1.0, std::abs(y))) {
      if (std::abs(branch_g(a, r, y)) <= 1e-13) return y;
    }
  }
  if (std::abs(branch_g(a, r, y)) <= 1e-13) return y;
  throw NumericError("leading_pair: Newton did not converge in 50 steps");
}

// Accumulated change of arg h along the straight segment z0 -> z1, refined
// until every sub-step is certified and turns by less than pi/4.
struct ContourWalk {
  const ModelParams& params;
  double min_modulus = INFINITY;
  bool too_close = false;

  cplx h(cplx z) {
    const cplx v = char_fn(z, params);
    min_modulus = std::min(min_modulus, std::abs(v));
    if (std::abs(v) < kContourMinModulus) too_close = true;
    return v;
  }

  // |h'(z)| <= 1 + |a| r e^{-r Re z}.  When that bound times the segment length
  // stays below |h0| and |h1|, h cannot leave a disk around h0 that excludes 0,
  // so the principal arg of h1/h0 is the exact change along the segment.
  bool certified(cplx z0, cplx z1, cplx h0, cplx h1) const {
    const double re_min = std::min(z0.real(), z1.real());
    const double lip = 1.0 + std::abs(params.a) * params.r * std::exp(-params.r * re_min);
    const double len = std::abs(z1 - z0);
    return lip * len < std::min(std::abs(h0), std::abs(h1));
  }

  double segment(cplx z0, cplx z1, cplx h0, cplx h1, int depth) {
    const double turn = std::arg(h1 / h0);
    if (std::abs(turn) < kPi / 4.0 && certified(z0, z1, h0, h1)) return turn;
    if (depth > 60) throw NumericError("count_roots_right_of: phase resolution failure");
    const cplx zm = 0.5 * (z0 + z1);
    const cplx hm = h(zm);
    if (too_close) return 0.0;
    return segment(z0, zm, h0, hm, depth + 1) + segment(zm, z1, hm, h1, depth + 1);
  }

  double edge(cplx z0, cplx z1) {
    const cplx h0 = h(z0);
    const cplx h1 = h(z1);
    if (too_close) return 0.0;
    return segment(z0, z1, h0, h1, 0);
  }
};

}  // namespace

cplx char_fn(cplx lambda, const ModelParams& params) {
  return lambda - params.a * std::exp(-lambda * params.r);
}

LeadingPair leading_pair(const ModelParams& params) {
  check_params(params);
  check_window(params.a);
  const double a = params.a;
  const double r = params.r;
  const double y = solve_branch(a, r);
  const double mu = y / r;
  const double disc = a * a * std::exp(-2.0 * mu * r) - mu * mu;
  if (!(disc > 0.0)) throw NumericError("leading_pair: negative discriminant for omega");
  cplx lambda{mu, std::sqrt(disc)};

  // Polish on h; the branch equation already pins the root to ~1e-15.
  const cplx hv = char_fn(lambda, params);
  const cplx dh = 1.0 + a * r * std::exp(-lambda * r);
  lambda -= hv / dh;
  if (std::abs(char_fn(lambda, params)) > kRootResidualTol) {
    throw NumericError("leading_pair: polished root residual above tolerance");
  }
  return {lambda.real(), std::abs(lambda.imag())};
}

double mu_derivative(double a, double r) {
  check_params({a, 0.0, r});
  check_window(a);
  const double y = solve_branch(a, r);
  const double dgdy = branch_dg_dy(a, r, y);
  if (std::abs(dgdy) < 1e-14) throw NumericError("mu_derivative: dG/dy singular on the branch");
  return -branch_dg_da(a, r, y) / dgdy / r;
}

RootCount count_roots_right_of(double sigma, const ModelParams& params) {
  check_params(params);
  double s = sigma;
  for (int attempt = 0; attempt <= 5; ++attempt) {
    // On Re lambda >= s every root has |lambda| <= |a| e^{-s r}.
    const double bound = std::abs(params.a) * std::exp(-s * params.r);
    const double im_bound = bound + 1.0;
    const double re_max = std::max(s + 4.0, bound + 1.0);

    ContourWalk walk{params};
    const cplx p0{s, -im_bound}, p1{re_max, -im_bound}, p2{re_max, im_bound}, p3{s, im_bound};
    double total = walk.edge(p0, p1);
    if (!walk.too_close) total += walk.edge(p1, p2);
    if (!walk.too_close) total += walk.edge(p2, p3);
    if (!walk.too_close) total += walk.edge(p3, p0);
    if (walk.too_close) {
      s += 1e-6;
      continue;
    }
    const double winding = total / (2.0 * kPi);
    const double rounded = std::round(winding);
    if (std::abs(winding - rounded) > 1e-6) {
      throw NumericError("count_roots_right_of: non-integral winding number");
    }
    return {static_cast<int>(rounded), s, Box{s, re_max, -im_bound, im_bound}};
  }
  throw NumericError("count_roots_right_of: contour passes through a root after 5 retries");
}

SpectrumSummary summarize(const ModelParams& params, double sigma) {
  const LeadingPair lp = leading_pair(params);
  const RootCount rc = count_roots_right_of(sigma, params);
  return {lp.mu, lp.omega, mu_derivative(params.a, params.r), rc.count, rc.sigma, rc.box};
}

double gain_for_mu(double target_mu, double r) {
  // Newton on mu(a) - target, mu is monotone on the window near a = -1.
  double a = kGainAtHopf;
  for (int it = 0; it < 50; ++it) {
    const double mu = leading_pair({a, 0.0, r}).mu;
    const double f = mu - target_mu;
    if (std::abs(f) < 1e-15) return a;
    a -= f / mu_derivative(a, r);
    check_window(a);
  }
  throw NumericError("gain_for_mu: Newton did not converge");
}

}  // namespace bautin::spectrum
