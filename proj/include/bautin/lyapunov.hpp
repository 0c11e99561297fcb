#pragma once

// First and second Lyapunov coefficients of the reduced equation at the Hopf
// point a = -1, and the report for the points c where l1 vanishes.

#include <string>

#include "bautin/manifold.hpp"

namespace bautin::lyapunov {

// (8 - 12 pi) c^2 + (72 - 28 pi) c + 144 - 16 pi
double l1_numerator(double c);
// l1_numerator(c) / (10 (4 + pi^2)); equals (1/2) Re(i g20 g11 + g21) identically.
double l1_closed_form(double c);
double dl1_dc(double c);

// (1/2) Re(i g20 g11 + g21) from a table holding order 3.
double l1_from_cascade(const manifold::CoeffTable& table);
double l1_from_cascade(double c);

struct Candidates {
  double c1;  // larger root
  double c2;
};
Candidates bautin_candidates();

// Second Lyapunov coefficient from a table holding order 5 (omega0 = 1).
double l2_from_table(const manifold::CoeffTable& table);
double l2_at(double c);

// Determinant of d(nu1, nu2)/d(a, c) at (a, c) = (-1, c_star),
// nu1 = mu / omega, nu2 = l1.  Lower triangular: (mu'/omega) dl1/dc.
double regularity_jacobian(double c_star);

enum class Classification { bautin_l2_positive, bautin_l2_negative, degenerate };
std::string to_string(Classification cls);

struct BifurcationReport {
  double c_star = 0.0;
  double l1_at = 0.0;
  double dl1_dc = 0.0;
  double l2 = 0.0;
  double mu_prime = 0.0;
  double jacobian_det = 0.0;
  Classification classification = Classification::degenerate;
};

// Distance from c1 or c2 accepted by bautin_report.
inline constexpr double kCandidateWindow = 1e-3;
inline constexpr double kDegenerateL2 = 1e-6;
inline constexpr double kDegenerateDet = 1e-8;

// DomainError when c_star is not within kCandidateWindow of a root of l1.
BifurcationReport bautin_report(double c_star);

}  // namespace bautin::lyapunov
