#include "bautin/lyapunov.hpp"

#include <cmath>
#include <sstream>

#include "bautin/error.hpp"
#include "bautin/spectrum.hpp"

namespace bautin::lyapunov {

namespace {

const double kDenominator = 10.0 * (4.0 + kPi * kPi);
constexpr double kQa = 8.0 - 12.0 * kPi;
constexpr double kQb = 72.0 - 28.0 * kPi;
constexpr double kQc = 144.0 - 16.0 * kPi;

cplx cj(cplx z) { return std::conj(z); }

}  // namespace

double l1_numerator(double c) { return (kQa * c + kQb) * c + kQc; }

double l1_closed_form(double c) { return l1_numerator(c) / kDenominator; }

double dl1_dc(double c) { return (2.0 * kQa * c + kQb) / kDenominator; }

double l1_from_cascade(const manifold::CoeffTable& t) {
  const cplx g20 = t.g_at(2, 0), g11 = t.g_at(1, 1), g21 = t.g_at(2, 1);
  return 0.5 * std::real(kI * g20 * g11 + g21);
}

double l1_from_cascade(double c) { return l1_from_cascade(manifold::build_coeff_table(c, 3)); }

Candidates bautin_candidates() {
  // Same roots as -b/(2a) -+ ..., written with the leading coefficient made positive.
  const double disc = std::sqrt(36.0 + 212.0 * kPi + kPi * kPi);
  const double den = 2.0 * (3.0 * kPi - 2.0);
  return {(18.0 - 7.0 * kPi + disc) / den, (18.0 - 7.0 * kPi - disc) / den};
}

double l2_from_table(const manifold::CoeffTable& t) {
  auto g = [&](int j, int k) { return t.g_at(j, k); };
  const cplx g20 = g(2, 0), g11 = g(1, 1), g02 = g(0, 2);
  const cplx g30 = g(3, 0), g21 = g(2, 1), g12 = g(1, 2), g03 = g(0, 3);
  const cplx g40 = g(4, 0), g31 = g(3, 1), g22 = g(2, 2), g13 = g(1, 3), g32 = g(3, 2);

  const double t1 = g32.real();
  const double t2 =
      std::imag(g20 * cj(g31) - g11 * (4.0 * g31 + 3.0 * cj(g22)) - g02 * (g40 + cj(g13)) / 3.0 - g30 * g12);
  const double t3 =
      std::real(g20 * (cj(g11) * (3.0 * g12 - cj(g30)) + g02 * (cj(g12) - g30 / 3.0) + cj(g02) * g03 / 3.0) +
                g11 * (cj(g02) * (5.0 / 3.0 * cj(g30) + 3.0 * g12) + g02 * cj(g03) / 3.0 - 4.0 * g11 * g30)) +
      3.0 * std::imag(g20 * g11) * g21.imag();
  const double t4 = std::imag(g11 * cj(g02) * (cj(g20) * cj(g20) - 3.0 * cj(g20) * g11 - 4.0 * g11 * g11)) +
                    std::imag(g20 * g11) * (3.0 * std::real(g20 * g11) - 2.0 * std::norm(g02));
  return (t1 + t2 + t3 + t4) / 12.0;
}

double l2_at(double c) { return l2_from_table(manifold::build_coeff_table(c, 5)); }

double regularity_jacobian(double c_star) {
  const double mu_prime = spectrum::mu_derivative(kGainAtHopf, kDelay);
  return mu_prime / kOmegaAtHopf * dl1_dc(c_star);
}

std::string to_string(Classification cls) {
  switch (cls) {
    case Classification::bautin_l2_positive: return "bautin_l2_positive";
    case Classification::bautin_l2_negative: return "bautin_l2_negative";
    case Classification::degenerate: return "degenerate";
  }
  return "degenerate";
}

BifurcationReport bautin_report(double c_star) {
  if (!std::isfinite(c_star)) throw DomainError("bautin_report: c_star must be finite");
  const Candidates cand = bautin_candidates();
  if (std::abs(c_star - cand.c1) > kCandidateWindow && std::abs(c_star - cand.c2) > kCandidateWindow) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "bautin_report: c_star = " << c_star << " is not a root of l1 (roots " << cand.c1 << ", "
        << cand.c2 << ")";
    throw DomainError(msg.str());
  }

  const manifold::CoeffTable table = manifold::build_coeff_table(c_star, 5);
  BifurcationReport rep;
  rep.c_star = c_star;
  rep.l1_at = l1_from_cascade(table);
  rep.dl1_dc = dl1_dc(c_star);
  rep.l2 = l2_from_table(table);
  rep.mu_prime = spectrum::mu_derivative(kGainAtHopf, kDelay);
  rep.jacobian_det = rep.mu_prime / kOmegaAtHopf * rep.dl1_dc;
  if (std::abs(rep.l2) < kDegenerateL2 || std::abs(rep.jacobian_det) < kDegenerateDet) {
    rep.classification = Classification::degenerate;
  } else {
    rep.classification = rep.l2 > 0.0 ? Classification::bautin_l2_positive : Classification::bautin_l2_negative;
  }
  return rep;
}

}  // namespace bautin::lyapunov
