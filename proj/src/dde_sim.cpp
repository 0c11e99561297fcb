#include "bautin/dde_sim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

#include "bautin/error.hpp"
#include "bautin/lyapunov.hpp"

namespace bautin::dde {

namespace {

double rhs(const ModelParams& p, double x, double xd) { return p.a * xd + x * x + p.c * x * xd; }

bool within(const std::vector<double>& v, double rel_tol, double& mean) {
  mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  for (double e : v) {
    if (std::abs(e - mean) > rel_tol * std::abs(mean)) return false;
  }
  return true;
}

}  // namespace

Trajectory integrate(const ModelParams& params, double history_amp, double T, int N) {
  if (N < kMinStepsPerDelay) {
    throw DomainError("integrate: N must be an integer >= " + std::to_string(kMinStepsPerDelay));
  }
  if (!(T > 0.0) || !std::isfinite(T)) throw DomainError("integrate: T must be positive and finite");
  if (!std::isfinite(history_amp)) throw DomainError("integrate: history amplitude must be finite");
  if (!(params.r > 0.0)) throw DomainError("integrate: delay must be positive");

  Trajectory tr;
  tr.params = params;
  tr.history_amp = history_amp;
  tr.N = N;
  tr.dt = params.r / N;
  const double dt = tr.dt;
  const auto steps = static_cast<std::size_t>(std::ceil(T / dt - 1e-9));
  tr.x.reserve(steps + 1);
  tr.x.push_back(history_amp);

  // Right sides at grid points, kept for the last N + 1 steps.
  const std::size_t ring = static_cast<std::size_t>(N) + 2;
  std::vector<double> d(ring, 0.0);
  d[0] = rhs(params, history_amp, history_amp);

  const std::size_t lag = static_cast<std::size_t>(N);
  auto delayed_grid = [&](std::size_t k) { return k >= lag ? tr.x[k - lag] : history_amp; };
  // x at (k - N + 1/2) dt.
  auto delayed_mid = [&](std::size_t k) {
    if (k < lag) return history_amp;
    const std::size_t j = k - lag;
    const double x0 = tr.x[j], x1 = tr.x[j + 1];
    const double d0 = d[j % ring], d1 = d[(j + 1) % ring];
    return 0.5 * (x0 + x1) + dt / 8.0 * (d0 - d1);
  };

  for (std::size_t k = 0; k < steps; ++k) {
    const double xk = tr.x[k];
    const double xd0 = delayed_grid(k);
    const double xdm = delayed_mid(k);
    const double xd1 = delayed_grid(k + 1);
    const double k1 = rhs(params, xk, xd0);
    const double k2 = rhs(params, xk + 0.5 * dt * k1, xdm);
    const double k3 = rhs(params, xk + 0.5 * dt * k2, xdm);
    const double k4 = rhs(params, xk + dt * k3, xd1);
    const double next = xk + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

    if (!std::isfinite(next) || std::abs(next) > kDivergenceCutoff) {
      tr.diverged = true;
      tr.divergence_time = tr.t(k + 1);
      break;
    }
    tr.x.push_back(next);
    d[(k + 1) % ring] = rhs(params, next, delayed_grid(k + 1));
  }
  return tr;
}

std::string to_string(Stability s) {
  return s == Stability::attracting ? "attracting" : "repelling_estimated";
}

std::optional<CycleInfo> find_cycle(const Trajectory& traj, double transient_fraction) {
  if (!(transient_fraction >= 0.0 && transient_fraction <= 0.9)) {
    throw DomainError("find_cycle: transient fraction must lie in [0, 0.9]");
  }
  if (traj.diverged) throw DomainError("find_cycle: trajectory diverged");

  const auto& x = traj.x;
  const std::size_t start = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::floor(transient_fraction * static_cast<double>(x.size()))));
  std::vector<double> heights, times;
  for (std::size_t k = start; k + 1 < x.size(); ++k) {
    const double xm = x[k - 1], x0 = x[k], xp = x[k + 1];
    if (!(x0 > xm && x0 > xp)) continue;
    const double curv = xm - 2.0 * x0 + xp;
    const double delta = 0.5 * (xm - xp) / curv;
    heights.push_back(x0 - 0.25 * (xm - xp) * delta);
    times.push_back(traj.t(k) + delta * traj.dt);
  }
  if (heights.size() < static_cast<std::size_t>(kSettledPeaks) + 1) return std::nullopt;

  const std::vector<double> last_h(heights.end() - kSettledPeaks, heights.end());
  std::vector<double> last_dt;
  for (std::size_t i = times.size() - kSettledPeaks; i < times.size(); ++i) last_dt.push_back(times[i] - times[i - 1]);

  double amp = 0.0, period = 0.0;
  if (!within(last_h, kSettledRelTol, amp) || !within(last_dt, kSettledRelTol, period)) return std::nullopt;
  if (!(amp > kMinCycleAmplitude) || !(period > 0.0)) return std::nullopt;
  return CycleInfo{amp, period, true, Stability::attracting};
}

double basin_bisection(const ModelParams& params, double amp_lo, double amp_hi, const BasinOptions& opts) {
  if (!(amp_lo < amp_hi)) throw DomainError("basin_bisection: need amp_lo < amp_hi");
  auto diverges = [&](double amp) { return integrate(params, amp, opts.T, opts.N).diverged; };
  if (diverges(amp_lo)) throw DomainError("basin_bisection: lower amplitude diverges (no bracket)");
  if (!diverges(amp_hi)) throw DomainError("basin_bisection: upper amplitude stays bounded (no bracket)");
  double lo = amp_lo, hi = amp_hi;
  for (int i = 0; i < opts.iterations; ++i) {
    const double mid = 0.5 * (lo + hi);
    (diverges(mid) ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

RadiusPrediction predict_radii(double mu, double l1, double l2) {
  RadiusPrediction p;
  if (!(mu > 0.0) || !(l1 < 0.0) || !(l2 > 0.0)) return p;
  const double disc = l1 * l1 - 4.0 * l2 * mu;
  if (disc < 0.0) return p;
  const double root = std::sqrt(disc);
  p.two_cycles = disc > 0.0;
  p.rho_in = std::sqrt((-l1 - root) / (2.0 * l2));
  p.rho_out = std::sqrt((-l1 + root) / (2.0 * l2));
  return p;
}

ScanRow scan_row(double c, double mu, const ScanSpec& spec) {
  ScanRow row;
  row.c = c;
  row.mu = mu;
  row.a = spectrum::gain_for_mu(mu, kDelay);
  const manifold::CoeffTable table = manifold::build_coeff_table(c, 5);
  row.l1 = lyapunov::l1_from_cascade(table);
  row.l2 = lyapunov::l2_from_table(table);
  if (row.l1 < 0.0 && row.l2 > 0.0) row.mu_fold = row.l1 * row.l1 / (4.0 * row.l2);
  row.prediction = predict_radii(mu, row.l1, row.l2);
  if (!row.prediction.two_cycles) row.flags.push_back("outside_predicted_region");

  const ModelParams params{row.a, c, kDelay};
  const Trajectory inner = integrate(params, spec.inner_history, spec.inner_T, spec.N);
  std::optional<CycleInfo> cyc;
  if (inner.diverged) {
    row.flags.push_back("inner_history_diverged");
  } else {
    cyc = find_cycle(inner, spec.transient_fraction);
    if (!cyc) row.flags.push_back("inner_cycle_not_settled");
  }

  if (cyc) {
    row.inner_amp = cyc->amplitude;
    row.inner_period = cyc->period;
    bool attracting = true;
    for (double sign : {-1.0, 1.0}) {
      const double amp = spec.inner_history * (1.0 + sign * spec.perturbation);
      const Trajectory p = integrate(params, amp, spec.inner_T, spec.N);
      const auto pc = p.diverged ? std::nullopt : find_cycle(p, spec.transient_fraction);
      if (!pc || std::abs(pc->amplitude - cyc->amplitude) > spec.attraction_tol * cyc->amplitude) attracting = false;
    }
    row.inner_attracting = attracting;
    if (!attracting) row.flags.push_back("inner_not_attracting");
  }

  try {
    // Widen the upper bracket until it escapes; the cutoff bounds the search.
    double hi = spec.basin_hi;
    while (hi * 2.0 < kDivergenceCutoff && !integrate(params, hi, spec.basin.T, spec.basin.N).diverged) hi *= 2.0;
    row.outer_amp = basin_bisection(params, spec.inner_history, hi, spec.basin);
    if (row.inner_amp && !(*row.outer_amp > *row.inner_amp)) row.flags.push_back("outer_not_above_inner");
  } catch (const DomainError&) {
    row.flags.push_back("basin_not_bracketed");
  }
  return row;
}

int scan_threads(int requested, int rows) {
  int n = requested;
  if (n <= 0) {
    n = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    if (const char* env = std::getenv("BAUTIN_THREADS")) {
      const int cap = std::atoi(env);
      if (cap > 0) n = std::min(n, cap);
    }
  }
  return std::max(1, std::min(n, rows));
}

ScanResult two_cycle_scan(double c_star, const ScanSpec& spec) {
  if (spec.rows < 1) throw DomainError("two_cycle_scan: rows must be >= 1");
  if (!(spec.mu_fraction > 0.0 && spec.mu_fraction < 1.0)) {
    throw DomainError("two_cycle_scan: mu fraction must lie in (0, 1)");
  }
  const auto cand = lyapunov::bautin_candidates();
  if (std::abs(c_star - cand.c1) > lyapunov::kCandidateWindow &&
      std::abs(c_star - cand.c2) > lyapunov::kCandidateWindow) {
    throw DomainError("two_cycle_scan: c_star must be a root of l1");
  }

  ScanResult res;
  res.c_star = c_star;
  res.direction = lyapunov::dl1_dc(c_star) > 0.0 ? -1.0 : 1.0;

  // Region per row from the normal form at a = -1.
  struct Plan {
    double c, mu;
  };
  std::vector<Plan> plans;
  for (int i = 0; i < spec.rows; ++i) {
    const double c = c_star + res.direction * spec.c_span * (i + 1) / spec.rows;
    const manifold::CoeffTable table = manifold::build_coeff_table(c, 5);
    const double l1 = lyapunov::l1_from_cascade(table);
    const double l2 = lyapunov::l2_from_table(table);
    if (!(l1 < 0.0 && l2 > 0.0)) continue;
    plans.push_back({c, spec.mu_fraction * l1 * l1 / (4.0 * l2)});
  }
  if (plans.empty()) {
    res.message = "empty feasible region: no row has l1 < 0 < l2";
    return res;
  }
  res.feasible = true;

  res.rows.resize(plans.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < plans.size(); i = next++) {
      try {
        res.rows[i] = scan_row(plans[i].c, plans[i].mu, spec);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const int nthreads = scan_threads(spec.threads, static_cast<int>(plans.size()));
  std::vector<std::thread> pool;
  for (int t = 1; t < nthreads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);

  std::size_t flagged = 0;
  for (const auto& row : res.rows) flagged += row.flags.empty() ? 0 : 1;
  std::ostringstream msg;
  msg << res.rows.size() << " rows, " << flagged << " flagged";
  res.message = msg.str();
  return res;
}

}  // namespace bautin::dde
