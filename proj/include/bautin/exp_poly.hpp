#pragma once

// Exponential polynomials  f(s) = sum_{p,q} c_{p,q} s^p e^{i q s}  on a real
// interval, with integer frequencies q.  Every center-manifold coefficient
// function w_jk at the Hopf point lies in this class, including the secular
// terms s e^{is} produced by resonant forcing, so the boundary-value problems
// of the manifold module are solved exactly inside this algebra.

#include <compare>
#include <complex>
#include <map>

#include "bautin/constants.hpp"

namespace bautin::ep {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool operator==(const Interval&) const = default;
  bool contains(double s, double tol = 1e-12) const { return s >= lo - tol && s <= hi + tol; }
};

struct TermKey {
  int power = 0;  // p >= 0
  int freq = 0;   // q
  auto operator<=>(const TermKey&) const = default;
};

// Coefficients with magnitude below this are dropped after every operation.
inline constexpr double kPruneThreshold = 1e-14;

class ExpPoly {
 public:
  using TermMap = std::map<TermKey, cplx>;

  explicit ExpPoly(Interval interval) : interval_(interval) {}
  ExpPoly(Interval interval, TermMap terms);

  // c * s^p * e^{iqs}
  static ExpPoly monomial(Interval interval, int power, int freq, cplx coef = 1.0);
  // c * e^{iqs}
  static ExpPoly exponential(Interval interval, int freq, cplx coef = 1.0) {
    return monomial(interval, 0, freq, coef);
  }
  static ExpPoly constant(Interval interval, cplx value) { return monomial(interval, 0, 0, value); }

  const TermMap& terms() const { return terms_; }
  const Interval& interval() const { return interval_; }
  bool is_zero() const { return terms_.empty(); }
  cplx coefficient(int power, int freq) const;

  // Throws DomainError when s lies outside the interval (1e-12 slack).
  cplx operator()(double s) const;

  // F with F' = f and no s^0 e^{0} term.
  ExpPoly antiderivative() const;
  ExpPoly derivative() const;
  // Conjugated coefficients, negated frequencies: the pointwise conjugate on
  // real arguments.
  ExpPoly conj() const;
  // g(s) = f(s + shift), re-expanded in powers of s and placed on `target`.
  ExpPoly shifted(double shift, Interval target) const;

  ExpPoly& operator+=(const ExpPoly& other);
  ExpPoly& operator-=(const ExpPoly& other);
  ExpPoly& operator*=(cplx scale);

 private:
  void add_term(TermKey key, cplx value);
  void prune();

  Interval interval_;
  TermMap terms_;
};

// Interval mismatch throws DomainError.
ExpPoly operator+(const ExpPoly& f, const ExpPoly& g);
ExpPoly operator-(const ExpPoly& f, const ExpPoly& g);
ExpPoly operator-(const ExpPoly& f);
ExpPoly operator*(const ExpPoly& f, const ExpPoly& g);
ExpPoly operator*(cplx scale, const ExpPoly& f);
ExpPoly operator*(const ExpPoly& f, cplx scale);

// Named forms of the algebra.
inline ExpPoly add(const ExpPoly& f, const ExpPoly& g) { return f + g; }
inline ExpPoly mul(const ExpPoly& f, const ExpPoly& g) { return f * g; }
inline ExpPoly antiderivative(const ExpPoly& f) { return f.antiderivative(); }
inline cplx eval(const ExpPoly& f, double s) { return f(s); }

// \int_from^to f(s) ds, both limits inside f's interval.
cplx integrate(const ExpPoly& f, double from, double to);

}  // namespace bautin::ep
