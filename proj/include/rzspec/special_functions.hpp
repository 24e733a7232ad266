#pragma once

// Double-precision kernels: complex Gamma, the Gauss function
// 2F1(1/6, 5/6; 1; w) with its derivative, and K_nu(x) for complex order.

#include <complex>
#include <vector>

namespace rzspec::special {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline constexpr double kEulerGamma = 0.57721566490153286060651209008240243;

/// log with the imaginary part of the argument forced into (-pi, pi]:
/// a negative real with a signed-zero imaginary part maps to +i*pi.
cplx principal_log(cplx z);

/// z^p via principal_log.
cplx principal_pow(cplx z, cplx p);

/// Principal square root with the same (-pi, pi] argument convention.
cplx principal_sqrt(cplx z);

/// log Gamma(s) on the principal branch of the Lanczos form (Re s >= 1/2).
/// For Re s < 1/2 the reflection formula is applied; the result is then a
/// logarithm of Gamma, not necessarily the continuous log-Gamma branch.
cplx log_gamma(cplx s);

/// Gamma(s). Throws PoleError within 1e-14 of a non-positive integer.
cplx gamma_complex(cplx s);

/// Argument of the hypergeometric kernel. Keeps 1 - w alongside w so callers
/// that know the complement exactly (w close to 1) do not lose it to
/// cancellation.
class HypergeometricArgument {
 public:
  explicit HypergeometricArgument(cplx w);
  static HypergeometricArgument from_complement(cplx one_minus_w);

  cplx w() const noexcept { return w_; }
  cplx one_minus_w() const noexcept { return one_minus_w_; }

 private:
  HypergeometricArgument(cplx w, cplx one_minus_w) : w_(w), one_minus_w_(one_minus_w) {}
  cplx w_;
  cplx one_minus_w_;
};

struct Hyp2F1Value {
  cplx value;
  cplx derivative;  // d/dw
};

/// Which expansion produced a hypergeometric value. Exposed for the overlap
/// tests.
enum class Hyp2F1Region { maclaurin, pfaff, log_connection, inverse, inverse_complement, taylor_upper, taylor_lower };

Hyp2F1Region hyp2f1_region(const HypergeometricArgument& arg);

/// 2F1(1/6, 5/6; 1; w) and its derivative, principal branch (cut [1, inf),
/// argument convention (-pi, pi]). Throws DomainError at w == 1.
Hyp2F1Value hyp2f1_16_56_1_with_derivative(const HypergeometricArgument& arg);

/// Same as above but forcing a particular expansion. Throws ConvergenceError
/// when the requested expansion does not converge at arg.
Hyp2F1Value hyp2f1_16_56_1_in_region(const HypergeometricArgument& arg, Hyp2F1Region region);

inline cplx hyp2f1_16_56_1(const HypergeometricArgument& arg) {
  return hyp2f1_16_56_1_with_derivative(arg).value;
}

/// Order of K_nu. |Im nu| is capped (default 120) because the contour
/// quadrature below is tuned for that range.
class BesselOrder {
 public:
  static constexpr double kMaxImag = 120.0;
  explicit BesselOrder(cplx nu);
  cplx nu() const noexcept { return nu_; }

 private:
  cplx nu_;
};

/// K_nu(x) for x > 0. Returns exactly 0 for x > 700. Throws DomainError for
/// x <= 0.
///
/// For x >= |Im nu| + 10 the integral 1/2 Int exp(-x cosh w + nu w) dw is
/// taken on the line through the saddle sinh w = nu/x (height capped below
/// pi/2) with the substitution w = t_c + i alpha + asinh(u) and the trapezoid
/// rule. Closer to the origin the line integral cancels to e^{-pi|Im nu|/2}
/// and gets expensive, so K is carried inward from that point by Taylor steps
/// of the modified Bessel equation. K is recessive at infinity, which makes
/// the inward direction stable.
cplx bessel_k(BesselOrder nu, double x);

/// K_nu on [x_lo, inf) for one fixed order: the inward Taylor sweep is done
/// once and its local expansions are kept, so an evaluation costs one short
/// polynomial. Points outside the stored range fall back to bessel_k.
class BesselKTable {
 public:
  BesselKTable(BesselOrder nu, double x_lo);
  cplx operator()(double x) const;
  cplx nu() const noexcept { return nu_; }

 private:
  struct Node {
    double center;
    double step;
    std::vector<cplx> coefficients;
  };
  cplx nu_;
  double x_lo_;
  double x_hi_;
  std::vector<Node> nodes_;
};

}  // namespace rzspec::special
