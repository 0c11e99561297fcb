#include <doctest.h>

#include <random>

#include "bautin/error.hpp"
#include "bautin/exp_poly.hpp"
#include "bautin/serialize.hpp"
#include "support/oracles.hpp"

using namespace bautin;
using ep::ExpPoly;
using ep::Interval;

namespace {

const Interval kH{-kDelay, 0.0};

ExpPoly random_poly(std::mt19937& rng, Interval iv, int max_power = 2, int max_freq = 3) {
  std::uniform_int_distribution<int> pw(0, max_power), fq(-max_freq, max_freq), nterms(1, 5);
  std::uniform_real_distribution<double> coef(-2.0, 2.0);
  ExpPoly f(iv);
  for (int i = nterms(rng); i > 0; --i) f += ExpPoly::monomial(iv, pw(rng), fq(rng), {coef(rng), coef(rng)});
  return f;
}

std::vector<double> samples(Interval iv, int n = 11) {
  std::vector<double> s;
  for (int i = 0; i < n; ++i) s.push_back(iv.lo + (iv.hi - iv.lo) * i / (n - 1));
  return s;
}

}  // namespace

TEST_CASE("monomial evaluation matches the direct formula") {
  const ExpPoly f = ExpPoly::monomial(kH, 2, -3, {0.5, -1.0});
  for (double s : samples(kH)) {
    const cplx expect = cplx{0.5, -1.0} * s * s * std::polar(1.0, -3.0 * s);
    CHECK(std::abs(f(s) - expect) < 1e-15);
  }
}

TEST_CASE("evaluation outside the interval is a domain error") {
  const ExpPoly f = ExpPoly::exponential(kH, 1);
  CHECK_THROWS_AS(f(0.5), DomainError);
  CHECK_THROWS_AS(f(-kDelay - 0.1), DomainError);
  CHECK_NOTHROW(f(-kDelay));
}

TEST_CASE("interval mismatch is a domain error") {
  const ExpPoly f = ExpPoly::exponential(kH, 1);
  const ExpPoly g = ExpPoly::exponential({0.0, kDelay}, 1);
  CHECK_THROWS_AS(f + g, DomainError);
  CHECK_THROWS_AS(f * g, DomainError);
}

TEST_CASE("antiderivative of e^{is} and of s e^{is}") {
  const ExpPoly f = ExpPoly::exponential(kH, 1).antiderivative();
  CHECK(std::abs(f.coefficient(0, 1) - cplx{0.0, -1.0}) < 1e-15);
  CHECK(std::abs(f.coefficient(0, 0)) == 0.0);
  // \int s e^{is} = -i s e^{is} + e^{is}
  const ExpPoly g = ExpPoly::monomial(kH, 1, 1).antiderivative();
  CHECK(std::abs(g.coefficient(1, 1) - cplx{0.0, -1.0}) < 1e-15);
  CHECK(std::abs(g.coefficient(0, 1) - 1.0) < 1e-15);
  // \int s^2 = s^3/3
  const ExpPoly h = ExpPoly::monomial(kH, 2, 0).antiderivative();
  CHECK(std::abs(h.coefficient(3, 0) - 1.0 / 3.0) < 1e-15);
}

TEST_CASE("property: derivative inverts antiderivative") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const ExpPoly f = random_poly(rng, kH);
    const ExpPoly back = f.antiderivative().derivative();
    for (double s : samples(kH)) CHECK(std::abs(back(s) - f(s)) < 1e-12);
  }
}

TEST_CASE("property: product rule and pointwise product") {
  std::mt19937 rng(12);
  for (int trial = 0; trial < 200; ++trial) {
    const ExpPoly f = random_poly(rng, kH), g = random_poly(rng, kH);
    const ExpPoly lhs = (f * g).derivative();
    const ExpPoly rhs = f.derivative() * g + f * g.derivative();
    for (double s : samples(kH)) {
      CHECK(std::abs((f * g)(s) - f(s) * g(s)) < 1e-12);
      CHECK(std::abs(lhs(s) - rhs(s)) < 1e-11);
    }
  }
}

TEST_CASE("property: integrate agrees with Simpson quadrature") {
  std::mt19937 rng(13);
  for (int trial = 0; trial < 50; ++trial) {
    const ExpPoly f = random_poly(rng, kH, 3, 4);
    const cplx exact = ep::integrate(f, -kDelay, 0.0);
    const cplx quad = oracle::simpson([&](double s) { return f(s); }, -kDelay, 0.0);
    CHECK(std::abs(exact - quad) < 1e-10);
  }
}

TEST_CASE("property: conj is the pointwise conjugate") {
  std::mt19937 rng(14);
  for (int trial = 0; trial < 100; ++trial) {
    const ExpPoly f = random_poly(rng, kH);
    const ExpPoly g = f.conj();
    for (double s : samples(kH)) CHECK(std::abs(g(s) - std::conj(f(s))) < 1e-13);
  }
}

TEST_CASE("property: shifted(h) evaluates f(s + h)") {
  std::mt19937 rng(15);
  const Interval adj{0.0, kDelay};
  for (int trial = 0; trial < 100; ++trial) {
    const ExpPoly f = random_poly(rng, adj, 3, 3);
    const ExpPoly g = f.shifted(kDelay, kH);
    CHECK(g.interval() == kH);
    for (double s : samples(kH)) CHECK(std::abs(g(s) - f(s + kDelay)) < 1e-12);
  }
}

TEST_CASE("property: algebra is linear and associative") {
  std::mt19937 rng(16);
  for (int trial = 0; trial < 100; ++trial) {
    const ExpPoly f = random_poly(rng, kH), g = random_poly(rng, kH), h = random_poly(rng, kH);
    const cplx k{0.3, -1.7};
    for (double s : samples(kH, 5)) {
      CHECK(std::abs(((f * g) * h)(s) - (f * (g * h))(s)) < 1e-11);
      CHECK(std::abs((k * (f + g))(s) - (k * f(s) + k * g(s))) < 1e-12);
      CHECK(std::abs((f - f)(s)) == 0.0);
    }
  }
}

TEST_CASE("coefficients below the prune threshold are dropped") {
  ExpPoly f = ExpPoly::exponential(kH, 2, 1.0);
  f += ExpPoly::exponential(kH, 2, -1.0 + 1e-16);
  CHECK(f.is_zero());
  const ExpPoly g = ExpPoly::monomial(kH, 1, 1, 1e-15);
  CHECK(g.is_zero());
}

TEST_CASE("JSON round trip keeps every term") {
  std::mt19937 rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    const ExpPoly f = random_poly(rng, kH, 3, 3);
    const auto j = io::to_json(f);
    CHECK(j.at("interval")[0].get<double>() == kH.lo);
    const ExpPoly g = io::exp_poly_from_json(io::json::parse(j.dump()));
    CHECK(g.terms() == f.terms());
  }
}
