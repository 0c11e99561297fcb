#pragma once

// Direct simulation of  x' = a x(t-r) + x(t)^2 + c x(t) x(t-r)  from a constant
// history, and the cycle measurements built on it.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "bautin/spectrum.hpp"

namespace bautin::dde {

using spectrum::ModelParams;

inline constexpr int kMinStepsPerDelay = 200;
inline constexpr double kDivergenceCutoff = 10.0;

struct Trajectory {
  ModelParams params;
  double history_amp = 0.0;
  int N = kMinStepsPerDelay;  // steps per delay
  double dt = 0.0;            // r / N
  std::vector<double> x;      // x[k] = x(k dt), k = 0..steps
  bool diverged = false;
  double divergence_time = 0.0;

  double t(std::size_t k) const { return static_cast<double>(k) * dt; }
};

// RK4 with dt = r/N; delayed values at half steps come from the cubic Hermite
// interpolant of the stored solution.  Stops at the first |x| > 10.
Trajectory integrate(const ModelParams& params, double history_amp, double T, int N = kMinStepsPerDelay);

enum class Stability { attracting, repelling_estimated };
std::string to_string(Stability s);

struct CycleInfo {
  double amplitude = 0.0;  // mean of the last peak heights
  double period = 0.0;
  bool converged = false;
  Stability stability = Stability::attracting;
};

inline constexpr int kSettledPeaks = 5;
inline constexpr double kSettledRelTol = 0.005;
inline constexpr double kMinCycleAmplitude = 1e-6;

// Peaks after the transient, refined by a parabola through each sample triple.
// Absent unless the last 5 heights and 5 spacings agree within 0.5% of their means.
std::optional<CycleInfo> find_cycle(const Trajectory& traj, double transient_fraction);

struct BasinOptions {
  double T = 4000.0;
  int N = kMinStepsPerDelay;
  int iterations = 30;
};

// Constant-history amplitude separating bounded from diverging solutions.
// Requires amp_lo bounded and amp_hi diverging over opts.T.
double basin_bisection(const ModelParams& params, double amp_lo, double amp_hi, const BasinOptions& opts = {});

// Roots of mu + l1 rho^2 + l2 rho^4 = 0 (the normal-form radius equation).
struct RadiusPrediction {
  bool two_cycles = false;
  double rho_in = 0.0;
  double rho_out = 0.0;
};
RadiusPrediction predict_radii(double mu, double l1, double l2);

struct ScanSpec {
  int rows = 5;
  double c_span = 0.2;
  double mu_fraction = 0.4;  // of the fold value l1^2 / (4 l2)
  double inner_history = 0.02;
  double inner_T = 20000.0;
  double transient_fraction = 0.8;
  double perturbation = 0.1;     // relative history change for the attraction check
  double attraction_tol = 0.01;  // relative amplitude agreement
  double basin_hi = 1.0;
  BasinOptions basin;
  int N = kMinStepsPerDelay;
  int threads = 0;  // 0: BAUTIN_THREADS or hardware concurrency
};

struct ScanRow {
  double a = 0.0;
  double c = 0.0;
  double mu = 0.0;
  double l1 = 0.0;
  double l2 = 0.0;
  double mu_fold = 0.0;  // l1^2 / (4 l2) when l1 < 0 < l2, else 0
  RadiusPrediction prediction;
  std::optional<double> inner_amp;
  double inner_period = 0.0;
  bool inner_attracting = false;
  std::optional<double> outer_amp;
  std::vector<std::string> flags;  // empty when both cycles were found
};

// One row at given (c, mu): a from the spectrum branch, l1 and l2 at (a0, c).
ScanRow scan_row(double c, double mu, const ScanSpec& spec);

struct ScanResult {
  double c_star = 0.0;
  double direction = 1.0;  // c = c_star + direction * offset, offset in (0, c_span]
  std::vector<ScanRow> rows;
  bool feasible = false;
  std::string message;
};

// Rows with l1 < 0 < l2 and mu = mu_fraction * l1^2/(4 l2).  c moves away from
// c_star in the direction that makes l1 negative.
ScanResult two_cycle_scan(double c_star, const ScanSpec& spec);

int scan_threads(int requested, int rows);

}  // namespace bautin::dde
