#include "bautin/manifold.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "bautin/error.hpp"

namespace bautin::manifold {

namespace {

constexpr double r = kDelay;

// Compatibility tolerance for the resonant order (2,1).
constexpr double kW21Tol = 1e-9;

ExpPoly expo(int freq, cplx coef = 1.0) { return ExpPoly::exponential(history_interval(), freq, coef); }

int rate_of(Order order) { return order.first - order.second; }

std::string order_name(Order order) {
  std::ostringstream s;
  s << "(" << order.first << "," << order.second << ")";
  return s.str();
}

// Particular solution of w' = i m w + forcing with w(0) = 0:
// e^{ims} \int_0^s e^{-im tau} forcing(tau) d tau.
ExpPoly particular_solution(int rate, const ExpPoly& force) {
  const ExpPoly integrand = expo(-rate) * force;
  const ExpPoly anti = integrand.antiderivative();
  ExpPoly from_zero = anti - ExpPoly::constant(history_interval(), anti(0.0));
  return expo(rate) * from_zero;
}

// Solves  w' = i m w + forcing,  i m w(0) + w(-r) = bc  for the whole function.
ExpPoly solve_boundary_problem(Order order, const ExpPoly& force, cplx bc) {
  const int m = rate_of(order);
  const ExpPoly part = particular_solution(m, force);
  const cplx lhs = kI * static_cast<double>(m) + std::polar(1.0, -m * r);
  if (std::abs(lhs) < 1e-12) {
    throw NumericError("boundary problem " + order_name(order) + " is singular (resonant rate)");
  }
  const cplx w0 = (bc - part(-r)) / lhs;
  return expo(m, w0) + part;
}

cplx cj(cplx z) { return std::conj(z); }

// Mirrors an explicitly written order (j,k) to (k,j) via conjugation.
Order mirrored(Order o) { return {o.second, o.first}; }

}  // namespace

ep::Interval history_interval() { return {-kDelay, 0.0}; }
ep::Interval adjoint_interval() { return {0.0, kDelay}; }

cplx CoeffTable::F_at(int j, int k) const {
  auto it = F.find({j, k});
  if (it == F.end()) throw NumericError("coefficient table: F" + order_name({j, k}) + " missing");
  return it->second;
}

cplx CoeffTable::g_at(int j, int k) const {
  auto it = g.find({j, k});
  if (it == g.end()) throw NumericError("coefficient table: g" + order_name({j, k}) + " missing");
  return it->second;
}

const WCoeff& CoeffTable::w_at(int j, int k) const {
  auto it = w.find({j, k});
  if (it == w.end()) throw NumericError("coefficient table: w" + order_name({j, k}) + " missing");
  return it->second;
}

void CoeffTable::set_F(int j, int k, cplx value) {
  F[{j, k}] = value;
  g[{j, k}] = psi1_at_0() * value;
}

void CoeffTable::set_w(int j, int k, ExpPoly fn) {
  const cplx at0 = fn(0.0);
  const cplx at_mr = fn(-kDelay);
  w.insert_or_assign(Order{j, k}, WCoeff{std::move(fn), at0, at_mr});
}

cplx bilinear(const ExpPoly& psi, const ExpPoly& phi, double a) {
  const ExpPoly moved = psi.shifted(kDelay, phi.interval());
  return psi(0.0) * phi(0.0) + a * ep::integrate(moved * phi, -kDelay, 0.0);
}

cplx psi1_at_0() { return 2.0 * cplx{2.0, -kPi} / (4.0 + kPi * kPi); }

EigenData eigen_data() {
  const auto H = history_interval();
  const auto A = adjoint_interval();
  const ExpPoly phi1 = ExpPoly::exponential(H, 1);
  const ExpPoly phi2 = phi1.conj();
  // Adjoint eigenfunctions for the eigenvalues +-i under the unconjugated pairing.
  const ExpPoly adj1 = ExpPoly::exponential(A, -1);
  const ExpPoly adj2 = adj1.conj();

  const cplx e11 = bilinear(adj1, phi1), e12 = bilinear(adj1, phi2);
  const cplx e21 = bilinear(adj2, phi1), e22 = bilinear(adj2, phi2);
  const cplx det = e11 * e22 - e12 * e21;
  if (std::abs(det) < 1e-12) throw NumericError("eigen_data: singular E matrix");
  // First row of E^{-1}.
  const ExpPoly psi1 = (e22 / det) * adj1 + (-e12 / det) * adj2;

  const ExpPoly closed = ExpPoly::exponential(A, -1, 2.0 / cplx{2.0, kPi});
  for (double s : {0.0, kDelay / 3.0, kDelay}) {
    if (std::abs(psi1(s) - closed(s)) > 1e-12) {
      throw NumericError("eigen_data: adjoint eigenfunction disagrees with closed form");
    }
  }
  return {phi1, psi1, closed, psi1(0.0)};
}

cplx w20_at0_closed(double c) {
  const double d = 4.0 + kPi * kPi;
  return 2.0 * cplx{1.0, -c} * (4.0 * cplx{kPi, 4.0} / (3.0 * d) - cplx{1.0, 2.0} / 5.0);
}

cplx w11_at0_closed(double c) {
  const cplx g11 = psi1_at_0() * 2.0;
  (void)c;
  return 2.0 * (kPi * kPi - 4.0) / (4.0 + kPi * kPi) + g11 * cplx{1.0, -1.0} + cj(g11) * cplx{1.0, 1.0};
}

ExpPoly forcing(const CoeffTable& t, Order order) {
  auto [j, k] = order;
  if (k > j && !(j == k)) return forcing(t, mirrored(order)).conj();

  auto W = [&](int p, int q) -> const ExpPoly& { return t.w_at(p, q).fn; };
  auto G = [&](int p, int q) { return t.g_at(p, q); };
  auto Gb = [&](int p, int q) { return cj(t.g_at(p, q)); };

  if (order == Order{2, 0}) return expo(1, G(2, 0)) + expo(-1, Gb(0, 2));
  if (order == Order{1, 1}) return expo(1, G(1, 1)) + expo(-1, Gb(1, 1));
  if (order == Order{3, 0}) {
    return expo(1, G(3, 0)) + expo(-1, Gb(0, 3)) + 3.0 * G(2, 0) * W(2, 0) + 3.0 * Gb(0, 2) * W(1, 1);
  }
  if (order == Order{2, 1}) {
    return expo(1, G(2, 1)) + expo(-1, Gb(1, 2)) + 2.0 * G(1, 1) * W(2, 0) +
           (G(2, 0) + 2.0 * Gb(1, 1)) * W(1, 1) + Gb(0, 2) * W(0, 2);
  }
  if (order == Order{2, 2}) {
    return expo(1, G(2, 2)) + expo(-1, Gb(2, 2)) + 2.0 * G(1, 2) * W(2, 0) + 2.0 * Gb(1, 2) * W(0, 2) +
           2.0 * (G(2, 1) + Gb(2, 1)) * W(1, 1) + G(0, 2) * W(3, 0) + Gb(0, 2) * W(0, 3) +
           (4.0 * G(1, 1) + Gb(2, 0)) * W(2, 1) + (G(2, 0) + 4.0 * Gb(1, 1)) * W(1, 2);
  }
  if (order == Order{3, 1}) {
    return expo(1, G(3, 1)) + expo(-1, Gb(1, 3)) + 3.0 * G(2, 1) * W(2, 0) +
           (G(3, 0) + 3.0 * Gb(1, 2)) * W(1, 1) + Gb(0, 3) * W(0, 2) + 3.0 * G(1, 1) * W(3, 0) +
           3.0 * (G(2, 0) + Gb(1, 1)) * W(2, 1) + 3.0 * Gb(0, 2) * W(1, 2);
  }
  throw DomainError("forcing: order " + order_name(order) + " not part of the cascade");
}

cplx bc_constant(const CoeffTable& t, Order order) {
  return t.F_at(order.first, order.second) - forcing(t, order)(0.0);
}

double ode_residual(const CoeffTable& t, Order order, int samples) {
  const ExpPoly& fn = t.w_at(order.first, order.second).fn;
  const ExpPoly lhs = fn.derivative() - expo(0, kI * static_cast<double>(rate_of(order))) * fn;
  const ExpPoly rhs = forcing(t, order);
  double worst = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double s = -kDelay * static_cast<double>(i) / static_cast<double>(samples - 1);
    worst = std::max(worst, std::abs(lhs(s) - rhs(s)));
  }
  return worst;
}

double bc_residual(const CoeffTable& t, Order order) {
  const WCoeff& wc = t.w_at(order.first, order.second);
  const cplx lhs = kI * static_cast<double>(rate_of(order)) * wc.at0 + wc.at_mr;
  return std::abs(lhs - bc_constant(t, order));
}

CoeffTable quadratic_coeffs(double c) {
  CoeffTable t(c);
  t.set_F(2, 0, 2.0 * cplx{1.0, -c});
  t.set_F(1, 1, 2.0);
  t.set_F(0, 2, 2.0 * cplx{1.0, c});
  return t;
}

CoeffTable solve_w2(double c) {
  CoeffTable t = quadratic_coeffs(c);
  t.set_w(2, 0, solve_boundary_problem({2, 0}, forcing(t, {2, 0}), bc_constant(t, {2, 0})));
  t.set_w(1, 1, solve_boundary_problem({1, 1}, forcing(t, {1, 1}), bc_constant(t, {1, 1})));
  t.set_w(0, 2, t.w_at(2, 0).fn.conj());
  return t;
}

void cubic_coeffs(CoeffTable& t) {
  const double c = t.c;
  const WCoeff& w20 = t.w_at(2, 0);
  const WCoeff& w11 = t.w_at(1, 1);
  const cplx F30 = 3.0 * c * (w20.at_mr - w20.at0 * kI) + 6.0 * w20.at0;
  const cplx F21 = 2.0 * c * (w11.at_mr - kI * w11.at0) + 4.0 * w11.at0 + c * (w20.at_mr + w20.at0 * kI) +
                   2.0 * w20.at0;
  t.set_F(3, 0, F30);
  t.set_F(2, 1, F21);
  t.set_F(0, 3, cj(F30));
  t.set_F(1, 2, cj(F21));
}

void solve_w30(CoeffTable& t) {
  t.set_w(3, 0, solve_boundary_problem({3, 0}, forcing(t, {3, 0}), bc_constant(t, {3, 0})));
  t.set_w(0, 3, t.w_at(3, 0).fn.conj());
}

Order2Integrals order2_integrals(const CoeffTable& t) {
  const WCoeff& w20 = t.w_at(2, 0);
  const WCoeff& w11 = t.w_at(1, 1);
  const WCoeff& w02 = t.w_at(0, 2);
  const cplx g20 = t.g_at(2, 0), g11 = t.g_at(1, 1), g02 = t.g_at(0, 2);
  auto against = [](const ExpPoly& f) { return ep::integrate(f * expo(-1), 0.0, -kDelay); };

  Order2Integrals out{};
  out.I1 = against(w20.fn);
  out.I2 = against(w11.fn);
  out.I3 = against(w02.fn);
  out.I1_closed = w20.at_mr + kI * w20.at0 - kI * r * g20 + cj(g02);
  out.I2_closed = -w11.at_mr - kI * w11.at0 + kI * r * g11 - cj(g11);
  out.I3_closed = (-w02.at_mr - kI * w02.at0 + kI * r * g02 - cj(g20)) / 3.0;
  out.cancel1 = -2.0 * kI * g11 * out.I1 + 2.0 * w20.at0 * g11;
  out.cancel2 = -kI * (g20 + 2.0 * cj(g11)) * out.I2 + (2.0 * cj(g11) + g20) * w11.at0;
  out.cancel3 = -kI * cj(g02) * out.I3 + w02.at0 * cj(g02);
  return out;
}

W21Determination determine_w21(const CoeffTable& t) {
  const EigenData eig = eigen_data();
  const auto H = history_interval();
  const auto A = adjoint_interval();
  const ExpPoly Psi2 = eig.Psi1.conj();
  const ExpPoly rho = ExpPoly::monomial(H, 1, 1, -2.0);         // -2 s e^{is}
  const ExpPoly rho_tilde = ExpPoly::monomial(A, 1, -1, -2.0);  // -2 zeta e^{-i zeta}

  const cplx g20 = t.g_at(2, 0), g11 = t.g_at(1, 1), g02 = t.g_at(0, 2), g21 = t.g_at(2, 1);
  const cplx f21 = g21 / eig.Psi1(0.0);
  const cplx numerator = f21 * bilinear(eig.Psi1 + Psi2, rho) -
                         2.0 * g11 * bilinear(rho_tilde, t.w_at(2, 0).fn) -
                         (g20 + 2.0 * cj(g11)) * bilinear(rho_tilde, t.w_at(1, 1).fn) -
                         cj(g02) * bilinear(rho_tilde, t.w_at(0, 2).fn);

  W21Determination out{};
  out.at0 = numerator / (2.0 * r * kI + 2.0);
  out.cond1_rhs = bc_constant(t, {2, 1});

  const Order2Integrals ints = order2_integrals(t);
  const cplx F21 = t.F_at(2, 1);
  out.cond2_rhs = F21 - F21 * 8.0 / (4.0 + kPi * kPi) +
                  std::polar(1.0, -r) * (2.0 * g11 * ints.I1 + (g20 + 2.0 * cj(g11)) * ints.I2 + cj(g02) * ints.I3);

  const ExpPoly part = particular_solution(1, forcing(t, {2, 1}));
  out.reconstructed_at_mr = (expo(1, out.at0) + part)(-r);
  return out;
}

void solve_w21(CoeffTable& t) {
  const W21Determination det = determine_w21(t);
  const ExpPoly fn = expo(1, det.at0) + particular_solution(1, forcing(t, {2, 1}));
  const cplx from_cond1 = det.cond1_rhs - kI * det.at0;
  if (std::abs(fn(-r) - from_cond1) > kW21Tol) {
    std::ostringstream msg;
    msg << "solve_w21: reconstructed w21(-r) = " << fn(-r) << " disagrees with boundary relation value "
        << from_cond1;
    throw NumericError(msg.str());
  }
  t.set_w(2, 1, fn);
  t.set_w(1, 2, fn.conj());
}

void quartic_coeffs(CoeffTable& t) {
  const double c = t.c;
  const WCoeff &w20 = t.w_at(2, 0), &w11 = t.w_at(1, 1), &w02 = t.w_at(0, 2);
  const WCoeff &w30 = t.w_at(3, 0), &w21 = t.w_at(2, 1), &w12 = t.w_at(1, 2);

  const cplx F40 = 24.0 * (w30.at0 / 3.0 + w20.at0 * w20.at0 / 4.0 +
                           c * (w30.at_mr / 6.0 - kI * w30.at0 / 6.0 + w20.at0 * w20.at_mr / 4.0));
  const cplx F31 = c * (3.0 * w21.at_mr + w30.at_mr + kI * w30.at0 - 3.0 * kI * w21.at0 +
                        3.0 * w20.at0 * w11.at_mr + 3.0 * w11.at0 * w20.at_mr) +
                   6.0 * w11.at0 * w20.at0 + 6.0 * w21.at0 + 2.0 * w30.at0;
  const cplx F22 = c * (2.0 * w12.at_mr + 2.0 * w21.at_mr + w20.at0 * w02.at_mr + 4.0 * w11.at0 * w11.at_mr +
                        w02.at0 * w20.at_mr + 2.0 * kI * w21.at0 - 2.0 * kI * w12.at0) +
                   2.0 * w20.at0 * w02.at0 + 4.0 * w11.at0 * w11.at0 + 4.0 * w12.at0 + 4.0 * w21.at0;
  t.set_F(4, 0, F40);
  t.set_F(3, 1, F31);
  t.set_F(2, 2, F22);
  t.set_F(1, 3, cj(F31));
  t.set_F(0, 4, cj(F40));
}

void solve_w22_w31_and_g32(CoeffTable& t) {
  t.set_w(2, 2, solve_boundary_problem({2, 2}, forcing(t, {2, 2}), bc_constant(t, {2, 2})));
  t.set_w(3, 1, solve_boundary_problem({3, 1}, forcing(t, {3, 1}), bc_constant(t, {3, 1})));
  t.set_w(1, 3, t.w_at(3, 1).fn.conj());

  const double c = t.c;
  const WCoeff &w20 = t.w_at(2, 0), &w11 = t.w_at(1, 1), &w02 = t.w_at(0, 2);
  const WCoeff &w30 = t.w_at(3, 0), &w21 = t.w_at(2, 1), &w12 = t.w_at(1, 2);
  const WCoeff &w22 = t.w_at(2, 2), &w31 = t.w_at(3, 1);

  const cplx F32 =
      6.0 * w22.at0 + 4.0 * w31.at0 + 6.0 * w20.at0 * w12.at0 + 12.0 * w11.at0 * w21.at0 +
      2.0 * w02.at0 * w30.at0 +
      c * (3.0 * w22.at_mr + 2.0 * w31.at_mr + 3.0 * w20.at0 * w12.at_mr + 6.0 * w11.at0 * w21.at_mr +
           w02.at0 * w30.at_mr + w30.at0 * w02.at_mr + 6.0 * w21.at0 * w11.at_mr + 3.0 * w12.at0 * w20.at_mr +
           2.0 * kI * w31.at0 - 3.0 * kI * w22.at0);
  t.set_F(3, 2, F32);
  t.set_F(2, 3, cj(F32));
}

CoeffTable build_coeff_table(double c, int max_order) {
  if (max_order < 2 || max_order > 5) throw DomainError("build_coeff_table: order must be in 2..5");
  if (!std::isfinite(c)) throw DomainError("build_coeff_table: c must be finite");
  CoeffTable t = solve_w2(c);
  if (max_order >= 3) {
    cubic_coeffs(t);
    solve_w30(t);
    solve_w21(t);
  }
  if (max_order >= 4) quartic_coeffs(t);
  if (max_order >= 5) solve_w22_w31_and_g32(t);
  return t;
}

}  // namespace bautin::manifold
