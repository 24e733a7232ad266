#pragma once

// Eisenstein series, reduction to the standard fundamental domain, and the
// uniformizing map z(tau) = 1 - j(tau)/1728 with its inverse.

#include <complex>
#include <vector>

namespace rzspec::modular {

using cplx = std::complex<double>;

/// A point tau with Im tau > 0.
class UpperHalfPoint {
 public:
  explicit UpperHalfPoint(cplx tau);
  UpperHalfPoint(double x, double y) : UpperHalfPoint(cplx(x, y)) {}

  cplx tau() const noexcept { return tau_; }
  double x() const noexcept { return tau_.real(); }
  double y() const noexcept { return tau_.imag(); }

 private:
  cplx tau_;
};

/// Integer matrix [[a, b], [c, d]] with ad - bc = 1 acting by Mobius maps.
struct ModularMatrix {
  long long a = 1, b = 0, c = 0, d = 1;

  static ModularMatrix identity() { return {}; }
  static ModularMatrix translation(long long k) { return {1, k, 0, 1}; }
  static ModularMatrix inversion() { return {0, -1, 1, 0}; }

  long long det() const noexcept { return a * d - b * c; }
  cplx apply(cplx tau) const { return (double(a) * tau + double(b)) / (double(c) * tau + double(d)); }
  /// c tau + d
  cplx automorphy(cplx tau) const { return double(c) * tau + double(d); }

  friend ModularMatrix operator*(const ModularMatrix& l, const ModularMatrix& r) {
    return {l.a * r.a + l.b * r.c, l.a * r.b + l.b * r.d, l.c * r.a + l.d * r.c, l.c * r.b + l.d * r.d};
  }
  friend bool operator==(const ModularMatrix&, const ModularMatrix&) = default;
};

enum class Generator { T, T_inverse, S };

/// tau_reduced = matrix.apply(tau); word lists the generators in the order
/// they were applied.
struct ModularReduction {
  UpperHalfPoint tau_reduced;
  std::vector<Generator> word;
  ModularMatrix matrix;
};

ModularReduction fundamental_reduce(UpperHalfPoint tau);

/// True if |Re tau| <= 1/2 and |tau| >= 1, both up to `slack`.
bool in_fundamental_domain(cplx tau, double slack = 1e-12);

struct EisensteinPair {
  cplx e4;
  cplx e6;
};

/// E4 and E6 at tau, evaluated from q-expansions at the reduced point and
/// carried back with the weight factors (c tau + d)^{-k}.
EisensteinPair eisenstein_e4_e6(UpperHalfPoint tau);

/// Discriminant Delta(tau) = q prod (1 - q^n)^24, at tau as given (no weight
/// transformation is applied, so pass a reduced point for accuracy).
cplx delta_product(UpperHalfPoint tau);

/// z = 1 - j(tau)/1728 = -E6^2 / (1728 Delta).
cplx z_of_tau(UpperHalfPoint tau);

/// dz/dtau = 2 pi i E4^2 E6 / (1728 Delta).
cplx dz_dtau(UpperHalfPoint tau);

/// tau(z) from the hypergeometric ratio, before reduction, with dtau/dz.
struct HypergeometricTau {
  cplx tau;
  cplx dtau_dz;
};
HypergeometricTau tau_of_z_hypergeometric(cplx z);

/// tau(z) reduced to the fundamental domain. Throws SingularInputError at
/// z = 0 and z = 1.
UpperHalfPoint tau_of_z(cplx z);

/// The data needed to move a function of tau onto the z-plane: the reduced
/// tau(z) and the invariant scale Im tau * |dz/dtau| = V^{1/2}.
struct Uniformization {
  UpperHalfPoint tau;
  cplx dz_dtau;
  double scale;
};
Uniformization uniformize(cplx z);

struct GeometricPotentialValue {
  double v;
  cplx z;
};

/// V = (Im tau |dz/dtau|)^2; exactly 0 at z = 0 and z = 1.
GeometricPotentialValue potential_v(cplx z);

/// Same potential from (Im tau / |dtau/dz|)^2 on the hypergeometric route.
double potential_v_hypergeometric(cplx z);

}  // namespace rzspec::modular
