#pragma once

// Reference values computed in extended precision by methods that share no
// code with the library. Results are rounded to double at the end.

#include <complex>

namespace oracle {

using cplx = std::complex<double>;

/// log Gamma(s) for Re s > 0: upward shift then the Stirling series, 50 digits.
cplx log_gamma(cplx s);

/// 2F1(1/6, 5/6; 1; w) and d/dw, principal branch, w off [1, inf). Power
/// series near 0, then Taylor steps of the hypergeometric ODE along the
/// segment [0, w]; 50 digits.
struct Hyp {
  cplx value;
  cplx derivative;
};
Hyp hyp2f1_16_56_1(cplx w);

/// K_nu(x) = Int_0^inf exp(-x cosh t) cosh(nu t) dt by the trapezoid rule in
/// 100-digit arithmetic, |Im nu| <= 120.
cplx bessel_k(cplx nu, double x);

/// zeta(s) from the alternating series with Borwein's acceleration, 100 digits.
/// Re s > 0, |Im s| <= 80, s != 1.
cplx zeta(cplx s);

/// Hurwitz zeta for Re s > 1: 2000 explicit terms plus the integral tail with
/// three correction terms, 50 digits.
cplx hurwitz_zeta(cplx s, double a);

/// E4(i) = 3 Gamma(1/4)^8 / (2 pi)^6.
double e4_at_i();
/// E6(e^{i pi/3}) = 27 Gamma(1/3)^18 / (512 pi^12).
double e6_at_rho();

/// G4(tau) / (2 zeta(4)) from square partial sums of the lattice at radii
/// R, 2R, 4R with Richardson extrapolation in 1/R^2.
cplx e4_lattice(cplx tau, int radius);

}  // namespace oracle
