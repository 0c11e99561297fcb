#include "bautin/exp_poly.hpp"

#include <cmath>
#include <sstream>

#include "bautin/error.hpp"

namespace bautin::ep {

namespace {

void require_same_interval(const ExpPoly& f, const ExpPoly& g, const char* op) {
  if (!(f.interval() == g.interval())) {
    std::ostringstream msg;
    msg << "exp_poly " << op << ": interval mismatch [" << f.interval().lo << ", " << f.interval().hi
        << "] vs [" << g.interval().lo << ", " << g.interval().hi << "]";
    throw DomainError(msg.str());
  }
}

double binomial(int n, int k) {
  double b = 1.0;
  for (int i = 1; i <= k; ++i) b = b * static_cast<double>(n - k + i) / static_cast<double>(i);
  return b;
}

}  // namespace

ExpPoly::ExpPoly(Interval interval, TermMap terms) : interval_(interval), terms_(std::move(terms)) {
  prune();
}

ExpPoly ExpPoly::monomial(Interval interval, int power, int freq, cplx coef) {
  if (power < 0) throw DomainError("exp_poly: negative power");
  ExpPoly f(interval);
  f.add_term({power, freq}, coef);
  f.prune();
  return f;
}

cplx ExpPoly::coefficient(int power, int freq) const {
  auto it = terms_.find({power, freq});
  return it == terms_.end() ? cplx{} : it->second;
}

cplx ExpPoly::operator()(double s) const {
  if (!interval_.contains(s)) {
    std::ostringstream msg;
    msg << "exp_poly eval: s = " << s << " outside [" << interval_.lo << ", " << interval_.hi << "]";
    throw DomainError(msg.str());
  }
  cplx sum{};
  for (const auto& [key, coef] : terms_) {
    double sp = 1.0;
    for (int k = 0; k < key.power; ++k) sp *= s;
    sum += coef * sp * std::polar(1.0, key.freq * s);
  }
  return sum;
}

ExpPoly ExpPoly::antiderivative() const {
  ExpPoly out(interval_);
  for (const auto& [key, coef] : terms_) {
    if (key.freq == 0) {
      out.add_term({key.power + 1, 0}, coef / static_cast<double>(key.power + 1));
      continue;
    }
    // \int s^p e^{iqs} = s^p e^{iqs}/(iq) - (p/(iq)) \int s^{p-1} e^{iqs}
    const cplx iq{0.0, static_cast<double>(key.freq)};
    cplx c = coef;
    for (int p = key.power; p >= 0; --p) {
      out.add_term({p, key.freq}, c / iq);
      c = -c * static_cast<double>(p) / iq;
    }
  }
  out.terms_.erase({0, 0});
  out.prune();
  return out;
}

ExpPoly ExpPoly::derivative() const {
  ExpPoly out(interval_);
  for (const auto& [key, coef] : terms_) {
    if (key.freq != 0) out.add_term(key, cplx{0.0, static_cast<double>(key.freq)} * coef);
    if (key.power > 0) out.add_term({key.power - 1, key.freq}, static_cast<double>(key.power) * coef);
  }
  out.prune();
  return out;
}

ExpPoly ExpPoly::conj() const {
  ExpPoly out(interval_);
  for (const auto& [key, coef] : terms_) out.add_term({key.power, -key.freq}, std::conj(coef));
  return out;
}

ExpPoly ExpPoly::shifted(double shift, Interval target) const {
  ExpPoly out(target);
  for (const auto& [key, coef] : terms_) {
    const cplx phase = coef * std::polar(1.0, key.freq * shift);
    for (int k = 0; k <= key.power; ++k) {
      out.add_term({k, key.freq}, phase * binomial(key.power, k) * std::pow(shift, key.power - k));
    }
  }
  out.prune();
  return out;
}

ExpPoly& ExpPoly::operator+=(const ExpPoly& other) {
  require_same_interval(*this, other, "add");
  for (const auto& [key, coef] : other.terms_) add_term(key, coef);
  prune();
  return *this;
}

ExpPoly& ExpPoly::operator-=(const ExpPoly& other) {
  require_same_interval(*this, other, "sub");
  for (const auto& [key, coef] : other.terms_) add_term(key, -coef);
  prune();
  return *this;
}

ExpPoly& ExpPoly::operator*=(cplx scale) {
  for (auto& [key, coef] : terms_) coef *= scale;
  prune();
  return *this;
}

void ExpPoly::add_term(TermKey key, cplx value) { terms_[key] += value; }

void ExpPoly::prune() {
  std::erase_if(terms_, [](const auto& kv) { return std::abs(kv.second) < kPruneThreshold; });
}

ExpPoly operator+(const ExpPoly& f, const ExpPoly& g) {
  ExpPoly out = f;
  out += g;
  return out;
}

ExpPoly operator-(const ExpPoly& f, const ExpPoly& g) {
  ExpPoly out = f;
  out -= g;
  return out;
}

ExpPoly operator-(const ExpPoly& f) { return cplx{-1.0} * f; }

ExpPoly operator*(const ExpPoly& f, const ExpPoly& g) {
  require_same_interval(f, g, "mul");
  ExpPoly::TermMap terms;
  for (const auto& [kf, cf] : f.terms()) {
    for (const auto& [kg, cg] : g.terms()) {
      terms[{kf.power + kg.power, kf.freq + kg.freq}] += cf * cg;
    }
  }
  return ExpPoly(f.interval(), std::move(terms));
}

ExpPoly operator*(cplx scale, const ExpPoly& f) {
  ExpPoly out = f;
  out *= scale;
  return out;
}

ExpPoly operator*(const ExpPoly& f, cplx scale) { return scale * f; }

cplx integrate(const ExpPoly& f, double from, double to) {
  const ExpPoly F = f.antiderivative();
  return F(to) - F(from);
}

}  // namespace bautin::ep
