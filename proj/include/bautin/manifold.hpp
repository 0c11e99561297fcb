#pragma once

// Center-manifold coefficient cascade at the Hopf point (a, r) = (-1, pi/2).
//
// On the center manifold the state is x_t = z phi1 + conj(z) conj(phi1) + w(z, conj z),
// with w = sum_{j+k>=2} w_jk(s) z^j conj(z)^k / (j! k!) and reduced equation
// z' = i z + sum g_jk z^j conj(z)^k / (j! k!).  Matching powers of z gives, for
// every order (j, k), a linear ODE on [-r, 0]
//
//     w_jk' = i (j - k) w_jk + forcing_jk(s)
//
// and one boundary relation  i (j - k) w_jk(0) + w_jk(-r) = F_jk - forcing_jk(0).
// The forcing collects g_jk e^{is} + conj(g_kj) e^{-is} and the products of
// lower-order w's with lower-order g's.  F_jk are the Taylor coefficients of
// f = x(0)^2 + c x(0) x(-r) and g_jk = psi1(0) F_jk.
//
// Order (2,1) is resonant: the boundary relation does not fix w21(0).  It is
// fixed instead by the perturbation formula, which is equivalent to requiring
// that w21 has no component along phi1 under the bilinear form.

#include <map>
#include <utility>

#include "bautin/constants.hpp"
#include "bautin/exp_poly.hpp"

namespace bautin::manifold {

using ep::ExpPoly;
using Order = std::pair<int, int>;

ep::Interval history_interval();  // [-r, 0]
ep::Interval adjoint_interval();  // [0, r]

struct EigenData {
  ExpPoly phi1;     // e^{is} on [-r, 0]
  ExpPoly psi1;     // normalized adjoint eigenfunction on [0, r]
  ExpPoly Psi1;     // the same function in the form used by the w21 formula
  cplx psi1_at_0;   // 2 (2 - pi i) / (4 + pi^2)
};

struct WCoeff {
  ExpPoly fn;
  cplx at0;
  cplx at_mr;  // value at s = -r
};

struct CoeffTable {
  explicit CoeffTable(double c_value) : c(c_value) {}

  double c;
  std::map<Order, cplx> F;
  std::map<Order, cplx> g;
  std::map<Order, WCoeff> w;

  // Throw NumericError when the entry has not been computed yet.
  cplx F_at(int j, int k) const;
  cplx g_at(int j, int k) const;
  const WCoeff& w_at(int j, int k) const;
  bool has_w(int j, int k) const { return w.contains({j, k}); }

  // Stores F_jk and g_jk = psi1(0) F_jk.
  void set_F(int j, int k, cplx value);
  void set_w(int j, int k, ExpPoly fn);
};

// psi(0) phi(0) + a \int_{-r}^{0} psi(xi + r) phi(xi) d xi, without conjugation.
// psi lives on [0, r], phi on [-r, 0].
cplx bilinear(const ExpPoly& psi, const ExpPoly& phi, double a = kGainAtHopf);

EigenData eigen_data();
cplx psi1_at_0();

CoeffTable quadratic_coeffs(double c);
// Quadratic coefficients plus w20, w11, w02.
CoeffTable solve_w2(double c);
void cubic_coeffs(CoeffTable& table);
void solve_w30(CoeffTable& table);
void solve_w21(CoeffTable& table);
void quartic_coeffs(CoeffTable& table);
void solve_w22_w31_and_g32(CoeffTable& table);

// Runs the cascade up to total order max_order in {2, 3, 4, 5}.
CoeffTable build_coeff_table(double c, int max_order = 5);

// Homogeneous rate i(j-k) is encoded by j-k; forcing_jk excludes it.
ExpPoly forcing(const CoeffTable& table, Order order);
// Right side of  i (j - k) w(0) + w(-r) = bc_constant.
cplx bc_constant(const CoeffTable& table, Order order);

// Max over n equispaced points of |w' - i(j-k) w - forcing|.
double ode_residual(const CoeffTable& table, Order order, int samples = 20);
double bc_residual(const CoeffTable& table, Order order);

// Ingredients of the w21 determination.
struct W21Determination {
  cplx at0;              // perturbation formula
  cplx cond1_rhs;        // w21(-r) + i w21(0) from the boundary relation
  cplx cond2_rhs;        // the same quantity from the solved ODE
  cplx reconstructed_at_mr;
};
W21Determination determine_w21(const CoeffTable& table);

// The integrals I1, I2, I3 of w20, w11, w02 against e^{-i tau} over [0, -r],
// by quadrature in the algebra and by their closed forms.
struct Order2Integrals {
  cplx I1, I2, I3;
  cplx I1_closed, I2_closed, I3_closed;
  // -2 i g11 I1 + 2 w20(0) g11, etc.; all vanish.
  cplx cancel1, cancel2, cancel3;
};
Order2Integrals order2_integrals(const CoeffTable& table);

// Exact (pre-rounding) w20(0, c) closed form.
cplx w20_at0_closed(double c);
cplx w11_at0_closed(double c);

}  // namespace bautin::manifold
