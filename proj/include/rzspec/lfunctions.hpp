#pragma once

#include <complex>
#include <filesystem>
#include <string>
#include <vector>

namespace rzspec::lfunctions {

using cplx = std::complex<double>;

/// A non-trivial zero rho_n of zeta, indexed from 1 by increasing Im rho_n.
class ZetaZero {
 public:
  ZetaZero(int index, cplx rho);

  /// A zero on the critical line, rho = 1/2 + i*gamma.
  static ZetaZero on_critical_line(int index, double gamma);

  int index() const noexcept { return index_; }
  cplx rho() const noexcept { return rho_; }
  double gamma() const noexcept { return rho_.imag(); }
  /// |Re rho - 1/2|
  double distance_from_critical_line() const noexcept { return std::abs(rho_.real() - 0.5); }
  /// E_n = rho (1 - rho)
  cplx energy() const noexcept { return rho_ * (1.0 - rho_); }

 private:
  int index_;
  cplx rho_;
};

/// Real odd primitive character modulo 3 or 4.
class DirichletCharacter {
 public:
  explicit DirichletCharacter(int modulus);
  static DirichletCharacter chi_minus_3() { return DirichletCharacter(3); }
  static DirichletCharacter chi_minus_4() { return DirichletCharacter(4); }

  int modulus() const noexcept { return modulus_; }
  /// 1 if n = 1 mod m, -1 if n = m - 1 mod m, else 0 (negative n allowed).
  int operator()(long long n) const noexcept;

 private:
  int modulus_;
};

/// Riemann zeta. Euler-Maclaurin for Re s >= 0, functional equation below.
/// Throws PoleError at s = 1.
cplx zeta(cplx s);

/// Hurwitz zeta(s, a), a in (0, 1], by Euler-Maclaurin.
cplx hurwitz_zeta(cplx s, double a);

/// L(chi, s) through the Hurwitz decomposition m^{-s} sum_r chi(r) zeta(s, r/m).
cplx dirichlet_l(const DirichletCharacter& chi, cplx s);

/// Completed zeta pi^{-s/2} Gamma(s/2) zeta(s); symmetric under s -> 1 - s
/// and evaluated through that symmetry for Re s < 1/2. Poles at s = 0, 1.
cplx xi_completed(cplx s);

/// Riemann's entire xi(s) = s (s - 1) / 2 * xi_completed(s).
cplx riemann_xi(cplx s);

/// xi_completed(1/2 + i t) * exp(pi t / 4): real on the critical line, with
/// the exponential decay of the Gamma factor divided out.
double critical_line_function(double t);

struct ZeroSearchOptions {
  int max_count = 100;
  double step = 0.05;
  double bisection_tol = 1e-12;
  double t_max = 300.0;
};

/// First `count` zeros on the critical line, located by sign changes of
/// critical_line_function and refined by bisection.
std::vector<ZetaZero> find_zeros(int count, const ZeroSearchOptions& options = {});

/// Number of sign changes of critical_line_function on (t_lo, t_hi] with
/// the given scan step.
int count_sign_changes(double t_lo, double t_hi, double step);

/// Zeros from a text file: one positive decimal gamma_n per line, increasing;
/// '#' lines and blank lines ignored; LF or CRLF.
std::vector<ZetaZero> ingest_zeros(const std::filesystem::path& path);

/// Same, from in-memory text.
std::vector<ZetaZero> parse_zeros(const std::string& text);

/// One gamma per line at 17 significant digits.
std::string format_zeros(const std::vector<ZetaZero>& zeros);

}  // namespace rzspec::lfunctions
