#pragma once

// The real-analytic Eisenstein series and the Epstein zeta function of the
// lattice Z + tau Z.
//
// Normalization used throughout:
//   zeta_E(s, tau) = sum' |m tau + n|^{-2s}
//   phi_s(tau)     = y^s zeta_E(s, tau) / zeta(2s)
//   E*(tau, s)     = Lambda(2s) phi_s(tau) / 2,  Lambda(s) = pi^{-s/2} Gamma(s/2) zeta(s)
// and E* has the expansion
//   E* = Lambda(2s) y^s + Lambda(2s-1) y^{1-s}
//        + 4 sqrt(y) sum_{n>=1} n^{s-1/2} sigma_{1-2s}(n) K_{s-1/2}(2 pi n y) cos(2 pi n x),
// which is invariant under s -> 1 - s and therefore real when Re s = 1/2.

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "rzspec/modular.hpp"
#include "rzspec/special_functions.hpp"

namespace rzspec::eisenstein {

using cplx = std::complex<double>;
using modular::UpperHalfPoint;

struct EpsteinValue {
  cplx s;
  UpperHalfPoint tau;
  cplx value;
  double error_estimate;  // absolute
};

/// Direct lattice sum over 0 < max(|m|, |n|) <= radius (half lattice,
/// doubled) plus the integral of the tail outside the square. The error
/// estimate extrapolates the difference between radius and radius/2.
/// Throws DivergenceError for Re s <= 1 and DomainError for radius < 50.
EpsteinValue epstein_bruteforce(cplx s, UpperHalfPoint tau, int radius);

class EisensteinSeries {
 public:
  enum class BesselMode { tabulated, direct };

  /// Throws DegenerateParameterError at s = 1/2 and PoleError at s = 0, 1.
  explicit EisensteinSeries(cplx s, BesselMode mode = BesselMode::tabulated);

  cplx s() const noexcept { return s_; }
  /// Lambda(2s)
  cplx lambda_2s() const noexcept { return lambda_2s_; }

  /// E*(tau, s), evaluated at the reduced point.
  cplx completed(UpperHalfPoint tau) const;
  /// y^s zeta_E / zeta(2s)
  cplx phi(UpperHalfPoint tau) const { return 2.0 * completed(tau) / lambda_2s_; }
  /// phi multiplied by Lambda(2s)/|Lambda(2s)|; real on the critical line.
  cplx phi_normalized(UpperHalfPoint tau) const { return 2.0 * completed(tau) / std::abs(lambda_2s_); }
  /// zeta_E(s, tau) = 2 pi^s y^{-s} E* / Gamma(s); 0 where Gamma(s) has a pole.
  cplx epstein(UpperHalfPoint tau) const;
  /// zeta_E(s, tau) / zeta(2s) = phi y^{-s}; finite across the trivial zeros.
  cplx epstein_over_zeta_2s(UpperHalfPoint tau) const;

 private:
  cplx bessel(double x) const;

  cplx s_;
  cplx nu_;
  cplx lambda_2s_;
  cplx lambda_2s_minus_1_;
  std::vector<cplx> coefficients_;  // n^{s-1/2} sigma_{1-2s}(n), index n
  std::optional<special::BesselKTable> table_;
};

struct ReducedWave {
  cplx s;
  UpperHalfPoint tau;
  cplx value;
};

/// One-off phi_s(tau) through the Fourier-Bessel expansion.
ReducedWave phi_s(cplx s, UpperHalfPoint tau);

struct FactorizationGap {
  std::string point;  // "i" or "rho"
  cplx lhs;           // zeta_E from the expansion
  cplx rhs;           // 4 zeta L(chi_{-4}) or 6 zeta L(chi_{-3})
  double relative_gap;
};

/// zeta_E(s, i) against 4 zeta(s) L(chi_{-4}, s) and zeta_E(s, e^{i pi/3})
/// against 6 zeta(s) L(chi_{-3}, s).
std::vector<FactorizationGap> boundary_factorization_check(cplx s);

}  // namespace rzspec::eisenstein
