#include <doctest.h>

#include <cmath>

#include "rzspec/eisenstein.hpp"
#include "rzspec/error.hpp"
#include "rzspec/lfunctions.hpp"

using namespace rzspec;
using eisenstein::cplx;
using eisenstein::EisensteinSeries;
using modular::UpperHalfPoint;

namespace {

const cplx kI(0.0, 1.0);
const cplx kRho(0.5, std::sqrt(3.0) / 2);

double rel(cplx a, cplx b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_CASE("brute-force lattice sums") {
  // zeta_E(2, i) = 4 zeta(2) L(chi_{-4}, 2) = 4 (pi^2/6) G
  const auto v = eisenstein::epstein_bruteforce(2.0, UpperHalfPoint(kI), 200);
  const double catalan = 0.915965594177219015;
  const double want = 4.0 * (M_PI * M_PI / 6.0) * catalan;
  CHECK(std::abs(v.value - want) < 1e-9);
  CHECK(v.error_estimate < 1e-8);
  CHECK(v.error_estimate > 0.0);
  CHECK_THROWS_AS(eisenstein::epstein_bruteforce(1.0, UpperHalfPoint(kI), 200), DivergenceError);
  CHECK_THROWS_AS(eisenstein::epstein_bruteforce(cplx(0.9, 3.0), UpperHalfPoint(kI), 200), DivergenceError);
  CHECK_THROWS_AS(eisenstein::epstein_bruteforce(2.0, UpperHalfPoint(kI), 49), DomainError);
}

TEST_CASE("continuation agrees with the lattice sum") {
  for (cplx s : {cplx(2.0, 0.0), cplx(1.5, 0.7), cplx(3.0, -2.0), cplx(2.2, 10.0)}) {
    for (cplx tau : {kI, cplx(0.3, 1.2), cplx(-0.45, 0.95), cplx(0.1, 2.5)}) {
      CAPTURE(s);
      CAPTURE(tau);
      const EisensteinSeries series(s);
      const auto brute = eisenstein::epstein_bruteforce(s, UpperHalfPoint(tau), 200);
      const cplx cont = series.epstein(UpperHalfPoint(tau));
      CHECK(std::abs(cont - brute.value) < 10 * brute.error_estimate + 1e-12 * std::abs(cont));
    }
  }
}

TEST_CASE("parameter checks") {
  CHECK_THROWS_AS(EisensteinSeries(0.5), DegenerateParameterError);
  CHECK_THROWS_AS(EisensteinSeries(0.0), PoleError);
  CHECK_THROWS_AS(EisensteinSeries(1.0), PoleError);
  CHECK_NOTHROW(EisensteinSeries(cplx(0.5, 14.134725141734693)));
}

TEST_CASE("symmetries of the completed series") {
  const cplx s(0.3, 7.0);
  const EisensteinSeries a(s);
  const EisensteinSeries b(1.0 - s);
  for (cplx tau : {cplx(0.2, 1.1), cplx(-0.5, 0.9), cplx(0.0, 3.0)}) {
    CAPTURE(tau);
    CHECK(rel(a.completed(UpperHalfPoint(tau)), b.completed(UpperHalfPoint(tau))) < 1e-12);
  }
  // Invariance under the group, evaluated at unreduced points.
  const cplx tau(0.17, 1.3);
  const cplx v = a.phi(UpperHalfPoint(tau));
  CHECK(rel(a.phi(UpperHalfPoint(tau + 3.0)), v) < 1e-12);
  CHECK(rel(a.phi(UpperHalfPoint(-1.0 / tau)), v) < 1e-12);
  CHECK(rel(a.phi(UpperHalfPoint(tau / (2.0 * tau + 1.0))), v) < 1e-12);
  // x -> -x symmetry of a series in cos(2 pi n x).
  CHECK(rel(a.phi(UpperHalfPoint(-0.17, 1.3)), v) < 1e-13);
}

TEST_CASE("the normalized series is real on the critical line") {
  const cplx rho(0.5, 21.022039638771555);
  const EisensteinSeries series(rho);
  for (cplx tau : {cplx(0.0, 1.0), cplx(0.3, 0.97), cplx(-0.2, 1.6), cplx(0.49, 4.0)}) {
    CAPTURE(tau);
    const cplx v = series.phi_normalized(UpperHalfPoint(tau));
    CHECK(std::abs(v.imag()) < 1e-13 * std::max(1.0, std::abs(v)));
  }
}

TEST_CASE("hyperbolic Laplacian eigenvalue") {
  const cplx s(0.5, 14.134725141734693);
  const EisensteinSeries series(s);
  const cplx tau(0.13, 1.4);
  const double h = 1e-3;
  auto f = [&](cplx t) { return series.phi(UpperHalfPoint(t)); };
  const cplx lap = (f(tau + h) + f(tau - h) + f(tau + cplx(0, h)) + f(tau - cplx(0, h)) - 4.0 * f(tau)) / (h * h);
  const double y = tau.imag();
  // y^2 (d_xx + d_yy) phi = s (s - 1) phi
  CHECK(rel(y * y * lap, s * (s - 1.0) * f(tau)) < 1e-4);
}

TEST_CASE("tabulated and direct Bessel modes agree") {
  const cplx s(0.5, 49.773832477672302);
  const EisensteinSeries tab(s, EisensteinSeries::BesselMode::tabulated);
  const EisensteinSeries direct(s, EisensteinSeries::BesselMode::direct);
  for (cplx tau : {cplx(0.0, 0.8660254037844386), cplx(0.25, 1.0), cplx(0.4, 3.0), cplx(-0.1, 12.0)}) {
    CAPTURE(tau);
    const cplx a = tab.completed(UpperHalfPoint(tau));
    const cplx b = direct.completed(UpperHalfPoint(tau));
    CHECK(std::abs(a - b) < 1e-12 * std::abs(tab.lambda_2s()));
  }
  const auto one = eisenstein::phi_s(s, UpperHalfPoint(0.25, 1.0));
  CHECK(std::abs(one.value - direct.phi(UpperHalfPoint(0.25, 1.0))) < 1e-13 * std::abs(one.value));
}

TEST_CASE("factorization at the elliptic points") {
  for (cplx s : {cplx(2.0, 0.0), cplx(1.5, 0.7), cplx(3.0, 5.0), cplx(0.3, 2.0)}) {
    CAPTURE(s);
    const auto gaps = eisenstein::boundary_factorization_check(s);
    REQUIRE(gaps.size() == 2);
    CHECK(gaps[0].point == "i");
    CHECK(gaps[1].point == "rho");
    for (const auto& g : gaps) CHECK(g.relative_gap < 1e-12);
  }
  for (int n : {1, 2}) {
    const auto zero = lfunctions::find_zeros(n).back();
    for (const auto& g : eisenstein::boundary_factorization_check(zero.rho())) {
      CHECK(std::abs(g.lhs) < 1e-10);
      CHECK(std::abs(g.rhs) < 1e-10);
    }
  }
}

TEST_CASE("trivial zeros cancel in zeta_E / zeta(2s)") {
  for (double s0 : {-1.0, -2.0, -3.0}) {
    for (double d : {-1e-6, 1e-6}) {
      const EisensteinSeries series(s0 + d);
      for (cplx tau : {kI, kRho}) {
        CAPTURE(s0 + d);
        const cplx r = series.epstein_over_zeta_2s(UpperHalfPoint(tau));
        CHECK(std::isfinite(std::abs(r)));
        CHECK(std::abs(r) < 1e6);
        CHECK(std::abs(r) > 1e-3);
      }
    }
  }
  const EisensteinSeries two(2.0);
  const cplx ratio = two.epstein_over_zeta_2s(UpperHalfPoint(kI));
  CHECK(rel(ratio, two.epstein(UpperHalfPoint(kI)) / lfunctions::zeta(4.0)) < 1e-14);
  // At a Gamma pole the Epstein value itself is reported as 0.
  CHECK(EisensteinSeries(-2.0).epstein(UpperHalfPoint(kI)) == cplx(0.0));
}
