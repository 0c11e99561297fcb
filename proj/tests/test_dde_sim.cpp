#include <doctest.h>

#include <cstdlib>

#include "bautin/dde_sim.hpp"
#include "bautin/error.hpp"
#include "bautin/lyapunov.hpp"
#include "support/oracles.hpp"

using namespace bautin;
using namespace bautin::dde;

namespace {

double max_abs(const Trajectory& tr, std::size_t from, std::size_t to) {
  double m = 0.0;
  for (std::size_t k = from; k < to && k < tr.x.size(); ++k) m = std::max(m, std::abs(tr.x[k]));
  return m;
}

// Half peak-to-trough swings, stamped at the peak time.
std::vector<std::pair<double, double>> half_swings(const Trajectory& tr) {
  std::vector<std::pair<double, double>> out;
  double last_peak = NAN, last_peak_t = 0.0;
  for (std::size_t k = 1; k + 1 < tr.x.size(); ++k) {
    const double xm = tr.x[k - 1], x0 = tr.x[k], xp = tr.x[k + 1];
    if (x0 > xm && x0 > xp) {
      last_peak = x0;
      last_peak_t = tr.t(k);
    } else if (x0 < xm && x0 < xp && !std::isnan(last_peak)) {
      out.emplace_back(last_peak_t, 0.5 * (last_peak - x0));
    }
  }
  return out;
}

}  // namespace

TEST_CASE("zero history stays at the equilibrium") {
  const auto tr = integrate({-1.0, 0.0, kDelay}, 0.0, 100.0);
  CHECK_FALSE(tr.diverged);
  CHECK(max_abs(tr, 0, tr.x.size()) <= 1e-14);
}

TEST_CASE("small solutions follow the exact method-of-steps solution of the linear part") {
  for (double a : {-1.0, -1.3, -0.7}) {
    const double amp = 1e-9;
    const auto tr = integrate({a, 0.0, kDelay}, amp, 12.0);
    const oracle::LinearDdeExact exact(a, kDelay, amp, 10);
    double worst = 0.0;
    for (std::size_t k = 0; k < tr.x.size(); k += 37) worst = std::max(worst, std::abs(tr.x[k] - exact(tr.t(k))));
    CAPTURE(a);
    CHECK(worst < 1e-6 * amp);
  }
}

TEST_CASE("fourth-order convergence under step halving") {
  const ModelParams p{-1.05, 3.0, kDelay};
  const double T = 12.0 * kDelay;  // every N lands on T exactly
  const auto x1 = integrate(p, 0.1, T, 200), x2 = integrate(p, 0.1, T, 400), x4 = integrate(p, 0.1, T, 800);
  const double e1 = std::abs(x1.x.back() - x4.x.back());
  const double e2 = std::abs(x2.x.back() - x4.x.back());
  CHECK(e1 / e2 > 10.0);
  CHECK(e1 < 1e-8);
}

TEST_CASE("grid and step count") {
  const auto tr = integrate({-1.0, 0.0, kDelay}, 0.0, 10.0, 200);
  CHECK(tr.dt == kDelay / 200);
  CHECK(tr.x.size() == static_cast<std::size_t>(std::ceil(10.0 / tr.dt)) + 1);
  CHECK(tr.t(tr.x.size() - 1) >= 10.0);
}

TEST_CASE("decay for mu < 0 and growth for mu > 0") {
  const auto down = integrate({-0.9, 0.0, kDelay}, 0.01, 200.0);
  CHECK_FALSE(down.diverged);
  CHECK(max_abs(down, down.x.size() - 1000, down.x.size()) < 1e-3 * 0.01);
  CHECK_FALSE(find_cycle(down, 0.5).has_value());

  const auto up = integrate({-1.1, 0.0, kDelay}, 0.01, 60.0);
  const std::size_t n = up.x.size();
  CHECK(max_abs(up, n - 800, n) > 3.0 * max_abs(up, 0, 800));
}

TEST_CASE("divergence is flagged, not thrown") {
  const auto tr = integrate({-1.0, 0.0, kDelay}, 3.0, 100.0);
  CHECK(tr.diverged);
  CHECK(tr.divergence_time > 0.0);
  CHECK(tr.divergence_time < 100.0);
  CHECK(tr.t(tr.x.size() - 1) < tr.divergence_time);
  CHECK_THROWS_AS(find_cycle(tr, 0.5), DomainError);
}

TEST_CASE("argument errors") {
  CHECK_THROWS_AS(integrate({-1.0, 0.0, kDelay}, 0.1, 10.0, 199), DomainError);
  CHECK_THROWS_AS(integrate({-1.0, 0.0, kDelay}, 0.1, 0.0), DomainError);
  CHECK_THROWS_AS(integrate({-1.0, 0.0, kDelay}, NAN, 1.0), DomainError);
  const auto tr = integrate({-1.0, 0.0, kDelay}, 0.0, 1.0);
  CHECK_THROWS_AS(find_cycle(tr, 0.95), DomainError);
  CHECK_THROWS_AS(find_cycle(tr, -0.1), DomainError);
}

TEST_CASE("period near Hopf: linear frequency plus the normal-form shift") {
  // z' = (mu + i omega) z + c1 z |z|^2 + ..., so the cycle frequency is
  // omega + Im c1 rho^2 with rho^2 from mu + l1 rho^2 + l2 rho^4 = 0.
  const double c = 3.0;
  const auto t = manifold::build_coeff_table(c, 5);
  const cplx g20 = t.g_at(2, 0), g11 = t.g_at(1, 1), g02 = t.g_at(0, 2), g21 = t.g_at(2, 1);
  const cplx c1 = 0.5 * kI * (g20 * g11 - 2.0 * std::norm(g11) - std::norm(g02) / 3.0) + 0.5 * g21;
  const double l1 = lyapunov::l1_from_cascade(t), l2 = lyapunov::l2_from_table(t);
  CHECK(std::abs(c1.real() - l1) < 1e-12);
  for (double a : {-1.005, -1.01}) {
    const auto cyc = find_cycle(integrate({a, c, kDelay}, 0.05, 3000.0), 0.8);
    REQUIRE(cyc.has_value());
    const auto lp = spectrum::leading_pair({a, 0.0, kDelay});
    const double rho2 = (-l1 - std::sqrt(l1 * l1 - 4.0 * l2 * lp.mu)) / (2.0 * l2);
    const double nf_period = 2.0 * kPi / (lp.omega + c1.imag() * rho2);
    CAPTURE(a);
    CHECK(std::abs(cyc->period - nf_period) < 0.005 * nf_period);
    CHECK(std::abs(cyc->period - 2.0 * kPi / lp.omega) < 0.05 * 2.0 * kPi / lp.omega);
    CHECK(cyc->stability == Stability::attracting);
  }
}

TEST_CASE("past the second equilibrium the cycle is gone at c = 3") {
  // x* = -a/(1+c) = 0.275 lies inside the would-be cycle at a = -1.1.
  for (double amp : {0.001, 0.01, 0.05}) CHECK(integrate({-1.1, 3.0, kDelay}, amp, 3000.0).diverged);
}

TEST_CASE("square-root amplitude scaling and the normal-form radius at c = 3") {
  const double l1 = lyapunov::l1_closed_form(3.0), l2 = lyapunov::l2_at(3.0);
  auto amp = [](double a) {
    const auto cyc = find_cycle(integrate({a, 3.0, kDelay}, 0.05, 3000.0), 0.8);
    REQUIRE(cyc.has_value());
    return cyc->amplitude;
  };
  const double big = amp(-1.04), small = amp(-1.01);
  CHECK(std::abs(big / small - 2.0) < 0.4);
  const double mu = spectrum::leading_pair({-1.01, 0.0, kDelay}).mu;
  const double rho = std::sqrt((-l1 - std::sqrt(l1 * l1 - 4.0 * l2 * mu)) / (2.0 * l2));
  CHECK(std::abs(small - 2.0 * rho) < 0.05 * 2.0 * rho);
}

TEST_CASE("amplitude is stable under step halving") {
  const ModelParams p{-1.04, 3.0, kDelay};
  const auto c1 = find_cycle(integrate(p, 0.05, 3000.0, 200), 0.8);
  const auto c2 = find_cycle(integrate(p, 0.05, 3000.0, 400), 0.8);
  REQUIRE(c1.has_value());
  REQUIRE(c2.has_value());
  CHECK(std::abs(c1->amplitude - c2->amplitude) < 0.002 * c2->amplitude);
}

TEST_CASE("basin boundary around the subcritical cycle") {
  const double l1 = lyapunov::l1_closed_form(0.0);
  double prev = INFINITY;
  for (double a : {-0.99, -0.995}) {
    const ModelParams p{a, 0.0, kDelay};
    const double b = basin_bisection(p, 0.01, 1.0);
    CHECK_FALSE(integrate(p, 0.9 * b, 4000.0).diverged);
    CHECK(integrate(p, 1.1 * b, 4000.0).diverged);
    const double mu = spectrum::leading_pair(p).mu;
    const double predicted = 2.0 * std::sqrt(-mu / l1);
    CHECK(b > 0.5 * predicted);
    CHECK(b < 2.0 * predicted);
    CHECK(b < prev);
    prev = b;
  }
  CHECK_THROWS_AS(basin_bisection({-0.99, 0.0, kDelay}, 0.01, 0.02), DomainError);
  CHECK_THROWS_AS(basin_bisection({-0.99, 0.0, kDelay}, 2.0, 3.0), DomainError);
  CHECK_THROWS_AS(basin_bisection({-0.99, 0.0, kDelay}, 0.5, 0.1), DomainError);
}

TEST_CASE("radius prediction solves the truncated radius equation") {
  const auto p = predict_radii(0.0003, -0.08, 2.0);
  REQUIRE(p.two_cycles);
  for (double rho : {p.rho_in, p.rho_out}) {
    CHECK(std::abs(0.0003 - 0.08 * rho * rho + 2.0 * std::pow(rho, 4)) < 1e-15);
  }
  CHECK(p.rho_in < p.rho_out);
  CHECK_FALSE(predict_radii(0.002, -0.08, 2.0).two_cycles);
  CHECK_FALSE(predict_radii(0.0003, 0.08, 2.0).two_cycles);
}

TEST_CASE("second Lyapunov coefficient from the simulated growth law") {
  // At a = -1, c = c_i the radius obeys rho' = l2 rho^5 + O(rho^7), so the slope
  // of rho^-4 in a narrow band of rho gives l2 + K rho^2; extrapolate to rho = 0.
  const auto cand = lyapunov::bautin_candidates();
  for (double c : {cand.c1, cand.c2}) {
    const auto tr = integrate({-1.0, c, kDelay}, 0.08, 130000.0);
    const auto swings = half_swings(tr);
    std::vector<std::pair<double, double>> bands;  // (rho_mid^2, l2_eff)
    for (double lo : {0.04, 0.05, 0.06}) {
      double st = 0, sy = 0, stt = 0, sty = 0;
      int n = 0;
      for (const auto& [t, half] : swings) {
        const double rho = 0.5 * half;
        if (rho < lo || rho > lo + 0.01) continue;
        const double y = std::pow(rho, -4.0);
        st += t, sy += y, stt += t * t, sty += t * y, ++n;
      }
      REQUIRE(n > 50);
      bands.emplace_back(std::pow(lo + 0.005, 2), -(n * sty - st * sy) / (n * stt - st * st) / 4.0);
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (auto [x, y] : bands) sx += x, sy += y, sxx += x * x, sxy += x * y;
    const double k = 3.0;
    const double slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
    const double l2_sim = (sy - slope * sx) / k;
    CAPTURE(c);
    CAPTURE(l2_sim);
    CHECK(std::abs(l2_sim - lyapunov::l2_at(c)) < 0.02 * lyapunov::l2_at(c));
  }
}

TEST_CASE("two-cycle row inside the predicted region") {
  const auto cand = lyapunov::bautin_candidates();
  const double c = cand.c1 + 0.1;
  const double l1 = lyapunov::l1_closed_form(c), l2 = lyapunov::l2_at(c);
  const double mu = 0.4 * l1 * l1 / (4.0 * l2);
  const ScanRow row = scan_row(c, mu, ScanSpec{});
  CHECK(row.flags.empty());
  REQUIRE(row.inner_amp.has_value());
  REQUIRE(row.outer_amp.has_value());
  CHECK(row.inner_attracting);
  CHECK(*row.outer_amp > *row.inner_amp);
  for (auto [got, rho] : {std::pair{*row.inner_amp, row.prediction.rho_in}, std::pair{*row.outer_amp, row.prediction.rho_out}}) {
    CHECK(got > rho);        // 2 rho / 2
    CHECK(got < 4.0 * rho);  // 2 rho * 2
  }
}

TEST_CASE("scan direction makes l1 negative and threads do not change results") {
  const auto cand = lyapunov::bautin_candidates();
  ScanSpec spec;
  spec.rows = 2;
  spec.threads = 1;
  const auto serial = two_cycle_scan(cand.c2, spec);
  spec.threads = 2;
  const auto parallel = two_cycle_scan(cand.c2, spec);
  CHECK(serial.direction == -1.0);
  REQUIRE(serial.rows.size() == 2);
  REQUIRE(parallel.rows.size() == 2);
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(serial.rows[i].l1 < 0.0);
    CHECK(serial.rows[i].c < cand.c2);
    CHECK(serial.rows[i].inner_amp == parallel.rows[i].inner_amp);
    CHECK(serial.rows[i].outer_amp == parallel.rows[i].outer_amp);
  }
  CHECK(two_cycle_scan(cand.c1, ScanSpec{.rows = 1}).direction == 1.0);
  CHECK_THROWS_AS(two_cycle_scan(0.0, spec), DomainError);
}

TEST_CASE("thread count honours BAUTIN_THREADS") {
  ::setenv("BAUTIN_THREADS", "1", 1);
  CHECK(scan_threads(0, 8) == 1);
  ::unsetenv("BAUTIN_THREADS");
  CHECK(scan_threads(3, 8) == 3);
  CHECK(scan_threads(16, 2) == 2);
}
