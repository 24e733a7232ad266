#include "rzspec/eisenstein.hpp"

#include <array>
#include <cmath>

#include "rzspec/error.hpp"
#include "rzspec/lfunctions.hpp"

namespace rzspec::eisenstein {

using special::kPi;

namespace {

constexpr double kReducedYMin = 0.8660254037844386;  // sqrt(3)/2
constexpr int kLegendreNodes = 64;

struct Quadrature {
  std::array<double, kLegendreNodes> x{};
  std::array<double, kLegendreNodes> w{};
};

// Gauss-Legendre on [-1, 1] by Newton iteration on P_n.
const Quadrature& gauss_legendre() {
  static const Quadrature q = [] {
    Quadrature r;
    const int n = kLegendreNodes;
    for (int i = 0; i < n; ++i) {
      double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
      double dp = 1.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0;
        double p1 = x;
        for (int k = 2; k <= n; ++k) {
          const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-16) break;
      }
      r.x[i] = x;
      r.w[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return r;
  }();
  return q;
}

cplx lattice_power(cplx s, double norm2) { return std::exp(-s * std::log(norm2)); }

// Integral of |u tau + v|^{-2s} around the boundary of [-1, 1]^2.
cplx square_boundary_integral(cplx s, cplx tau) {
  const auto& q = gauss_legendre();
  cplx edge_u = 0.0;  // u = 1, v in [-1, 1]
  cplx edge_v = 0.0;  // v = 1, u in [-1, 1]
  for (int k = 0; k < kLegendreNodes; ++k) {
    edge_u += q.w[k] * lattice_power(s, std::norm(tau + q.x[k]));
    edge_v += q.w[k] * lattice_power(s, std::norm(q.x[k] * tau + 1.0));
  }
  // The edges u = -1 and v = -1 are the reflections (u, v) -> (-u, -v).
  return 2.0 * (edge_u + edge_v);
}

bool is_gamma_pole(cplx s) {
  return s.real() <= 0.0 && std::abs(s.imag()) < 1e-14 && std::abs(s.real() - std::round(s.real())) < 1e-14;
}

}  // namespace

EpsteinValue epstein_bruteforce(cplx s, UpperHalfPoint tau, int radius) {
  if (!(s.real() > 1.0)) throw DivergenceError("the Epstein lattice sum converges only for Re s > 1");
  if (radius < 50) throw DomainError("lattice radius must be at least 50");
  const cplx t = tau.tau();
  const int half = radius / 2;
  cplx inner = 0.0;
  cplx outer = 0.0;
  auto add = [&](long m, long n) {
    const cplx v = lattice_power(s, std::norm(double(m) * t + double(n)));
    if (std::max(std::labs(m), std::labs(n)) <= half) {
      inner += v;
    } else {
      outer += v;
    }
  };
  // Half lattice: m > 0 with any n, and m = 0 with n > 0.
  for (long n = 1; n <= radius; ++n) add(0, n);
  for (long m = 1; m <= radius; ++m) {
    for (long n = -radius; n <= radius; ++n) add(m, n);
  }
  const cplx boundary = square_boundary_integral(s, t);
  auto tail = [&](int r) {
    const double edge = r + 0.5;
    return std::exp((2.0 - 2.0 * s) * std::log(edge)) / (2.0 * s - 2.0) * boundary;
  };
  const cplx full = 2.0 * (inner + outer) + tail(radius);
  const cplx coarse = 2.0 * inner + tail(half);
  const double err = std::abs(full - coarse) / (std::pow(2.0, 2.0 * s.real()) - 1.0);
  return {s, tau, full, err};
}

EisensteinSeries::EisensteinSeries(cplx s, BesselMode mode) : s_(s), nu_(s - 0.5) {
  if (std::abs(s - 0.5) < 1e-14) throw DegenerateParameterError("s = 1/2 makes the reduced wave function vanish");
  if (std::abs(s - 1.0) < 1e-14 || std::abs(s) < 1e-14) throw PoleError("E*(tau, s) has poles at s = 0 and s = 1");
  const special::BesselOrder order(nu_);
  lambda_2s_ = lfunctions::xi_completed(2.0 * s);
  lambda_2s_minus_1_ = lfunctions::xi_completed(2.0 * s - 1.0);

  // Enough terms for K to fall 1e-16 below its size at the smallest
  // argument 2 pi n y the reduced domain allows.
  const double x_needed = std::abs(nu_.imag()) + 80.0 + 4.0 * std::abs(nu_.real());
  const int count = static_cast<int>(std::ceil(x_needed / (2.0 * kPi * kReducedYMin))) + 5;
  std::vector<cplx> sigma(count + 1, 0.0);
  const cplx exponent = 1.0 - 2.0 * s;
  for (int d = 1; d <= count; ++d) {
    const cplx dp = std::exp(exponent * std::log(double(d)));
    for (int m = d; m <= count; m += d) sigma[m] += dp;
  }
  coefficients_.assign(count + 1, 0.0);
  for (int n = 1; n <= count; ++n) coefficients_[n] = std::exp(nu_ * std::log(double(n))) * sigma[n];

  if (mode == BesselMode::tabulated) table_.emplace(order, 2.0 * kPi * kReducedYMin * (1.0 - 1e-9));
}

cplx EisensteinSeries::bessel(double x) const {
  return table_ ? (*table_)(x) : special::bessel_k(special::BesselOrder(nu_), x);
}

cplx EisensteinSeries::completed(UpperHalfPoint tau) const {
  const UpperHalfPoint r = modular::fundamental_reduce(tau).tau_reduced;
  const double x = r.x();
  const double y = r.y();
  const double log_y = std::log(y);
  const cplx constant = lambda_2s_ * std::exp(s_ * log_y) + lambda_2s_minus_1_ * std::exp((1.0 - s_) * log_y);

  const double threshold = std::abs(nu_.imag()) + 10.0;
  double scale = std::abs(constant);
  cplx series = 0.0;
  const int count = static_cast<int>(coefficients_.size()) - 1;
  int n = 1;
  for (; n <= count; ++n) {
    const double arg = 2.0 * kPi * n * y;
    if (arg > 700.0) break;
    const cplx term = coefficients_[n] * bessel(arg);
    const double bound = std::abs(term);
    scale = std::max(scale, 4.0 * std::sqrt(y) * bound);
    series += term * std::cos(2.0 * kPi * n * x);
    if (arg > threshold && 4.0 * std::sqrt(y) * bound < 1e-16 * scale) break;
  }
  if (n > count) throw ConvergenceError("Fourier-Bessel series did not reach its truncation bound");
  return constant + 4.0 * std::sqrt(y) * series;
}

cplx EisensteinSeries::epstein(UpperHalfPoint tau) const {
  if (is_gamma_pole(s_)) return 0.0;
  const cplx log_factor = s_ * std::log(kPi) - s_ * std::log(tau.y()) - special::log_gamma(s_);
  return 2.0 * std::exp(log_factor) * completed(tau);
}

cplx EisensteinSeries::epstein_over_zeta_2s(UpperHalfPoint tau) const {
  return phi(tau) * std::exp(-s_ * std::log(tau.y()));
}

ReducedWave phi_s(cplx s, UpperHalfPoint tau) {
  const EisensteinSeries e(s, EisensteinSeries::BesselMode::direct);
  return {s, tau, e.phi(tau)};
}

std::vector<FactorizationGap> boundary_factorization_check(cplx s) {
  const EisensteinSeries e(s, EisensteinSeries::BesselMode::direct);
  const cplx z = lfunctions::zeta(s);
  auto gap = [](const std::string& label, cplx lhs, cplx rhs) {
    const double denom = std::max(std::abs(lhs), std::abs(rhs));
    return FactorizationGap{label, lhs, rhs, denom > 0.0 ? std::abs(lhs - rhs) / denom : 0.0};
  };
  const UpperHalfPoint i(0.0, 1.0);
  const UpperHalfPoint rho(0.5, 0.5 * std::sqrt(3.0));
  return {
      gap("i", e.epstein(i), 4.0 * z * lfunctions::dirichlet_l(lfunctions::DirichletCharacter::chi_minus_4(), s)),
      gap("rho", e.epstein(rho), 6.0 * z * lfunctions::dirichlet_l(lfunctions::DirichletCharacter::chi_minus_3(), s)),
  };
}

}  // namespace rzspec::eisenstein
