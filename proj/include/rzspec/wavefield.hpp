#pragma once

// Wave functions on the z-plane: psi(z) = phi(tau(z)) / V(z)^{1/2}, where phi
// is the Eisenstein series at a zeta zero, phase-normalized to be real on
// the critical line.

#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

#include "rzspec/eisenstein.hpp"
#include "rzspec/lfunctions.hpp"
#include "rzspec/modular.hpp"

namespace rzspec::wavefield {

using cplx = std::complex<double>;
using lfunctions::ZetaZero;
using modular::UpperHalfPoint;

struct Window {
  double xmin = 0.0;
  double xmax = 0.0;
  double ymin = 0.0;
  double ymax = 0.0;

  /// Throws DomainError unless xmin < xmax and ymin < ymax, all finite.
  void validate() const;
};

/// Samples on a uniform nx-by-ny lattice, x fastest: value(i, j) sits at
/// (xmin + i dx, ymin + j dy).
class GridField {
 public:
  GridField(Window window, int nx, int ny, int zero_index, cplx rho);

  const Window& window() const noexcept { return window_; }
  int nx() const noexcept { return nx_; }
  int ny() const noexcept { return ny_; }
  int zero_index() const noexcept { return zero_index_; }
  cplx rho() const noexcept { return rho_; }
  double dx() const noexcept { return dx_; }
  double dy() const noexcept { return dy_; }
  double x(int i) const noexcept { return window_.xmin + i * dx_; }
  double y(int j) const noexcept { return window_.ymin + j * dy_; }
  cplx z(int i, int j) const noexcept { return {x(i), y(j)}; }

  cplx& at(int i, int j) { return values_[index(i, j)]; }
  const cplx& at(int i, int j) const { return values_[index(i, j)]; }
  bool masked(int i, int j) const { return mask_[index(i, j)] != 0; }
  void set_masked(int i, int j) { mask_[index(i, j)] = 1; }

  const std::vector<cplx>& values() const noexcept { return values_; }

 private:
  std::size_t index(int i, int j) const noexcept { return static_cast<std::size_t>(j) * nx_ + i; }

  Window window_;
  int nx_;
  int ny_;
  int zero_index_;
  cplx rho_;
  double dx_;
  double dy_;
  std::vector<cplx> values_;
  std::vector<std::uint8_t> mask_;
};

/// Distance below which a sample counts as sitting on z = 0 or z = 1.
inline constexpr double kSingularRadius = 1e-9;

class WaveFunction {
 public:
  explicit WaveFunction(const ZetaZero& zero);

  const ZetaZero& zero() const noexcept { return zero_; }
  cplx energy() const noexcept { return zero_.energy(); }
  const eisenstein::EisensteinSeries& series() const noexcept { return series_; }

  /// Phase-normalized phi at tau.
  cplx phi(UpperHalfPoint tau) const { return series_.phi_normalized(tau); }
  /// V^{1/2} psi = phi(tau(z)); 0 at the wells.
  cplx reduced(cplx z) const;
  /// psi(z); 0 within kSingularRadius of z = 0 and z = 1.
  cplx psi(cplx z) const;
  /// psi with V taken from the hypergeometric derivative instead of dz/dtau.
  cplx psi_hypergeometric(cplx z) const;

 private:
  ZetaZero zero_;
  eisenstein::EisensteinSeries series_;
};

/// psi at a single point for the given zero.
cplx psi_value(const ZetaZero& zero, cplx z);

struct GridOptions {
  int workers = 0;                       // 0: worker_count()
  std::size_t max_samples = 4'000'000;
};

/// psi on the grid; samples at the wells are 0 and masked.
GridField evaluate_grid(const WaveFunction& wave, const Window& window, int nx, int ny,
                        const GridOptions& options = {});

/// The geometric potential V (real part) on the grid, zero_index 0.
GridField evaluate_potential_grid(const Window& window, int nx, int ny, const GridOptions& options = {});

/// Same lattice filled from an arbitrary function of z (tests, controls).
GridField evaluate_function_grid(const std::function<cplx(cplx)>& f, const Window& window, int nx, int ny,
                                 int zero_index, const GridOptions& options = {});

struct LocalExpansionFit {
  cplx alpha;                 // (a + b) / 2
  cplx coefficient_eta2;      // a, coefficient of eta^2
  cplx coefficient_eta2_bar;  // b, coefficient of conj(eta)^2
  double residual_fraction;   // |f - alpha (eta^2 + conj(eta)^2)|^2 / |f|^2 on the circle
  double circle_radius;
};

/// Least squares on 64 points of |eta| = radius against eta^2, conj(eta)^2 and
/// the four cubic monomials; f is a function of eta.
LocalExpansionFit fit_local_expansion(const std::function<cplx(cplx)>& f, double radius);

/// The same for phi(i + eta). radius must lie in [1e-3, 5e-2].
LocalExpansionFit fit_local_expansion(const WaveFunction& wave, double radius);

struct AsymptoticFit {
  double slope;      // exponent of |z| in the envelope
  double omega_est;  // frequency in log(log(1728|z|) / 2 pi)
  double amplitude;
  double phase;
  double d_n_assumed;
  int sign_changes;
};

/// Fits Re psi(r e^{i theta}) on log-spaced r in [r_lo, r_hi] to
/// A r^slope L^{-1/2} cos(omega log(L / 2 pi) - phase), L = log(1728 r).
AsymptoticFit fit_asymptotics(const WaveFunction& wave, double theta, double r_lo, double r_hi,
                              int samples = 400);

struct MassProfile {
  std::vector<double> radius;
  std::vector<double> mass;  // integral of |psi|^2 over |z| < radius
  bool monotone;
  double loglog_slope;       // least-squares d mass / d log log(1728 R)
};

/// Cumulative |psi|^2 over growing disks centered at 0.
MassProfile cumulative_mass(const WaveFunction& wave, const std::vector<double>& radii,
                            const GridOptions& options = {});

}  // namespace rzspec::wavefield
