#include "rzspec/wavefield.hpp"

#include <algorithm>
#include <cmath>

#include "rzspec/error.hpp"
#include "rzspec/parallel.hpp"

namespace rzspec::wavefield {

using special::kPi;

namespace {

bool near_well(cplx z) { return std::abs(z) < kSingularRadius || std::abs(z - 1.0) < kSingularRadius; }

int resolve_workers(const GridOptions& options) { return options.workers > 0 ? options.workers : worker_count(); }

void check_grid(const Window& window, int nx, int ny, const GridOptions& options) {
  window.validate();
  if (nx < 2 || ny < 2) throw DomainError("grids need at least 2 samples per axis");
  if (static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny) > options.max_samples) {
    throw ResourceError("grid of " + std::to_string(nx) + "x" + std::to_string(ny) + " exceeds the cap of " +
                        std::to_string(options.max_samples) + " samples");
  }
}

template <class F>
double golden_minimize(F&& f, double lo, double hi, double tol) {
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo;
  double b = hi;
  double c = b - g * (b - a);
  double d = a + g * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (b - a > tol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

void Window::validate() const {
  if (!(std::isfinite(xmin) && std::isfinite(xmax) && std::isfinite(ymin) && std::isfinite(ymax))) {
    throw DomainError("window bounds must be finite");
  }
  if (!(xmin < xmax) || !(ymin < ymax)) throw DomainError("window must satisfy xmin < xmax and ymin < ymax");
}

GridField::GridField(Window window, int nx, int ny, int zero_index, cplx rho)
    : window_(window),
      nx_(nx),
      ny_(ny),
      zero_index_(zero_index),
      rho_(rho),
      dx_((window.xmax - window.xmin) / (nx - 1)),
      dy_((window.ymax - window.ymin) / (ny - 1)),
      values_(static_cast<std::size_t>(nx) * ny),
      mask_(static_cast<std::size_t>(nx) * ny, 0) {
  if (nx < 2 || ny < 2) throw DomainError("grids need at least 2 samples per axis");
}

WaveFunction::WaveFunction(const ZetaZero& zero) : zero_(zero), series_(zero.rho()) {}

cplx WaveFunction::reduced(cplx z) const {
  if (near_well(z)) return 0.0;
  return phi(modular::tau_of_z(z));
}

cplx WaveFunction::psi(cplx z) const {
  if (near_well(z)) return 0.0;
  const modular::Uniformization u = modular::uniformize(z);
  return phi(u.tau) / u.scale;
}

cplx WaveFunction::psi_hypergeometric(cplx z) const {
  if (near_well(z)) return 0.0;
  return phi(modular::tau_of_z(z)) / std::sqrt(modular::potential_v_hypergeometric(z));
}

cplx psi_value(const ZetaZero& zero, cplx z) { return WaveFunction(zero).psi(z); }

GridField evaluate_function_grid(const std::function<cplx(cplx)>& f, const Window& window, int nx, int ny,
                                 int zero_index, const GridOptions& options) {
  check_grid(window, nx, ny, options);
  GridField field(window, nx, ny, zero_index, 0.0);
  parallel_for(ny, resolve_workers(options), [&](int j) {
    for (int i = 0; i < nx; ++i) field.at(i, j) = f(field.z(i, j));
  });
  return field;
}

GridField evaluate_grid(const WaveFunction& wave, const Window& window, int nx, int ny,
                        const GridOptions& options) {
  check_grid(window, nx, ny, options);
  GridField field(window, nx, ny, wave.zero().index(), wave.zero().rho());
  parallel_for(ny, resolve_workers(options), [&](int j) {
    for (int i = 0; i < nx; ++i) {
      const cplx z = field.z(i, j);
      if (near_well(z)) {
        field.at(i, j) = 0.0;
        field.set_masked(i, j);
      } else {
        field.at(i, j) = wave.psi(z);
      }
    }
  });
  return field;
}

GridField evaluate_potential_grid(const Window& window, int nx, int ny, const GridOptions& options) {
  check_grid(window, nx, ny, options);
  GridField field(window, nx, ny, 0, 0.0);
  parallel_for(ny, resolve_workers(options), [&](int j) {
    for (int i = 0; i < nx; ++i) {
      const cplx z = field.z(i, j);
      if (near_well(z)) {
        field.at(i, j) = 0.0;
        field.set_masked(i, j);
      } else {
        field.at(i, j) = modular::potential_v(z).v;
      }
    }
  });
  return field;
}

LocalExpansionFit fit_local_expansion(const std::function<cplx(cplx)>& f, double radius) {
  if (!(radius > 0.0) || !std::isfinite(radius)) throw FitError("circle radius must be positive");
  constexpr int kPoints = 64;
  std::vector<cplx> eta(kPoints);
  std::vector<cplx> values(kPoints);
  double power = 0.0;
  for (int k = 0; k < kPoints; ++k) {
    eta[k] = std::polar(radius, 2.0 * kPi * k / kPoints);
    values[k] = f(eta[k]);
    power += std::norm(values[k]);
  }
  if (!(power > 0.0)) throw FitError("field vanishes on the fit circle; the fit is rank-deficient");

  // On equally spaced points the monomials eta^a conj(eta)^b are distinct
  // Fourier modes e^{i(a-b)theta} (|a-b| <= 3), so the least-squares
  // coefficients are the discrete Fourier coefficients.
  auto mode = [&](int m) {
    cplx c = 0.0;
    for (int k = 0; k < kPoints; ++k) c += values[k] * std::polar(1.0, -2.0 * kPi * m * k / kPoints);
    return c / double(kPoints);
  };
  const double r2 = radius * radius;
  const cplx a = mode(2) / r2;
  const cplx b = mode(-2) / r2;
  const cplx alpha = 0.5 * (a + b);
  double outside = 0.0;
  for (int k = 0; k < kPoints; ++k) {
    outside += std::norm(values[k] - alpha * (eta[k] * eta[k] + std::conj(eta[k] * eta[k])));
  }
  return {alpha, a, b, outside / power, radius};
}

LocalExpansionFit fit_local_expansion(const WaveFunction& wave, double radius) {
  if (!(radius >= 1e-3 && radius <= 5e-2)) throw DomainError("local expansion radius must lie in [1e-3, 5e-2]");
  const cplx i(0.0, 1.0);
  return fit_local_expansion([&](cplx eta) { return wave.phi(UpperHalfPoint(i + eta)); }, radius);
}

AsymptoticFit fit_asymptotics(const WaveFunction& wave, double theta, double r_lo, double r_hi, int samples) {
  if (wave.zero().distance_from_critical_line() > 0.0) {
    throw DomainError("only zeros on the critical line have a determined far-field form");
  }
  if (!(r_lo >= 1e2 && r_hi <= 1e6 && r_lo < r_hi)) throw DomainError("r range must lie within [1e2, 1e6]");
  if (samples < 16) throw DomainError("asymptotic fit needs at least 16 samples");

  std::vector<double> r(samples);
  std::vector<double> u(samples);
  std::vector<double> data(samples);
  const double log_lo = std::log(r_lo);
  const double step = (std::log(r_hi) - log_lo) / (samples - 1);
  for (int k = 0; k < samples; ++k) {
    r[k] = std::exp(log_lo + k * step);
    const double big_l = std::log(1728.0 * r[k]);
    u[k] = std::log(big_l / (2.0 * kPi));
    data[k] = wave.psi(std::polar(r[k], theta)).real() * r[k] * std::sqrt(big_l);
  }

  std::vector<double> crossings;
  for (int k = 1; k < samples; ++k) {
    if ((data[k - 1] < 0.0) != (data[k] < 0.0)) {
      const double t = data[k - 1] / (data[k - 1] - data[k]);
      crossings.push_back(u[k - 1] + t * (u[k] - u[k - 1]));
    }
  }
  const int changes = static_cast<int>(crossings.size());
  if (changes < 2) throw InsufficientOscillationError("fewer than 2 sign changes along the ray");
  const double omega0 = kPi * (changes - 1) / (crossings.back() - crossings.front());

  // For fixed (slope, omega) the amplitudes enter linearly.
  struct Linear {
    double residual, b, c;
  };
  auto solve = [&](double slope, double omega) {
    double s11 = 0, s12 = 0, s22 = 0, t1 = 0, t2 = 0;
    for (int k = 0; k < samples; ++k) {
      const double w = std::pow(r[k], slope + 1.0);
      const double b1 = w * std::cos(omega * u[k]);
      const double b2 = w * std::sin(omega * u[k]);
      s11 += b1 * b1;
      s12 += b1 * b2;
      s22 += b2 * b2;
      t1 += b1 * data[k];
      t2 += b2 * data[k];
    }
    const double det = s11 * s22 - s12 * s12;
    const double b = (t1 * s22 - t2 * s12) / det;
    const double c = (t2 * s11 - t1 * s12) / det;
    double res = 0.0;
    for (int k = 0; k < samples; ++k) {
      const double w = std::pow(r[k], slope + 1.0);
      const double e = data[k] - w * (b * std::cos(omega * u[k]) + c * std::sin(omega * u[k]));
      res += e * e;
    }
    return Linear{res, b, c};
  };
  auto best_slope = [&](double omega) {
    return golden_minimize([&](double sl) { return solve(sl, omega).residual; }, -2.0, 0.0, 1e-8);
  };
  auto profile = [&](double omega) { return solve(best_slope(omega), omega).residual; };

  constexpr int kScan = 240;
  const double lo = 0.7 * omega0;
  const double hi = 1.3 * omega0;
  const double dw = (hi - lo) / kScan;
  double best_omega = lo;
  double best_res = profile(lo);
  for (int k = 1; k <= kScan; ++k) {
    const double w = lo + k * dw;
    const double res = profile(w);
    if (res < best_res) {
      best_res = res;
      best_omega = w;
    }
  }
  const double omega = golden_minimize(profile, best_omega - dw, best_omega + dw, 1e-9 * omega0);
  const double slope = best_slope(omega);
  const Linear lin = solve(slope, omega);
  return {slope, omega, std::hypot(lin.b, lin.c), std::atan2(lin.c, lin.b), 0.0, changes};
}

MassProfile cumulative_mass(const WaveFunction& wave, const std::vector<double>& radii, const GridOptions& options) {
  if (radii.empty()) throw DomainError("no radii given");
  for (std::size_t k = 0; k < radii.size(); ++k) {
    if (!(radii[k] > 0.0) || (k > 0 && !(radii[k] > radii[k - 1]))) {
      throw DomainError("radii must be positive and increasing");
    }
  }
  constexpr double kInner = 1e-3;
  constexpr int kPerDecade = 48;
  constexpr int kAngles = 256;

  std::vector<double> nodes;
  const int decades = static_cast<int>(std::ceil(std::log10(radii.back() / kInner) * kPerDecade));
  for (int k = 0; k <= decades; ++k) nodes.push_back(kInner * std::pow(10.0, double(k) / kPerDecade));
  nodes.insert(nodes.end(), radii.begin(), radii.end());
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end(),
                          [](double a, double b) { return std::abs(a - b) <= 1e-12 * b; }),
              nodes.end());
  while (nodes.back() > radii.back() * (1.0 + 1e-12)) nodes.pop_back();

  // Radial density r * Int |psi|^2 dtheta; the angular rule is spectral.
  std::vector<double> density(nodes.size());
  parallel_for(static_cast<int>(nodes.size()), resolve_workers(options), [&](int k) {
    double sum = 0.0;
    for (int a = 0; a < kAngles; ++a) sum += std::norm(wave.psi(std::polar(nodes[k], 2.0 * kPi * (a + 0.5) / kAngles)));
    density[k] = nodes[k] * sum * (2.0 * kPi / kAngles);
  });

  MassProfile out;
  double mass = 0.0;
  std::size_t next = 0;
  for (std::size_t k = 0; k < nodes.size() && next < radii.size(); ++k) {
    if (k > 0) mass += 0.5 * (density[k] + density[k - 1]) * (nodes[k] - nodes[k - 1]);
    if (std::abs(nodes[k] - radii[next]) <= 1e-12 * radii[next]) {
      out.radius.push_back(radii[next]);
      out.mass.push_back(mass);
      ++next;
    }
  }
  out.monotone = true;
  for (std::size_t k = 1; k < out.mass.size(); ++k) out.monotone = out.monotone && out.mass[k] > out.mass[k - 1];
  // Least-squares slope of mass against log log(1728 R).
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = double(out.mass.size());
  for (std::size_t k = 0; k < out.mass.size(); ++k) {
    const double x = std::log(std::log(1728.0 * out.radius[k]));
    sx += x;
    sy += out.mass[k];
    sxx += x * x;
    sxy += x * out.mass[k];
  }
  out.loglog_slope = n > 1 ? (n * sxy - sx * sy) / (n * sxx - sx * sx) : 0.0;
  return out;
}

}  // namespace rzspec::wavefield
