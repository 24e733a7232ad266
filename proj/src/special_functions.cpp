#include "rzspec/special_functions.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include "rzspec/error.hpp"

namespace rzspec::special {

namespace {

constexpr double kSqrt3 = 1.73205080756887729352744634150587237;
constexpr double kLn2 = 0.69314718055994530941723212145817657;
constexpr double kLn3 = 1.09861228866810969139524523692252571;

// Lanczos approximation, g = 671/128, 14 terms.
constexpr double kLanczosG = 5.2421875;
constexpr std::array<double, 14> kLanczosCoef = {
    57.1562356658629235,     -59.5979603554754912,     14.1360979747417471,
    -0.491913816097620199,   .339946499848118887e-4,   .465236289270485756e-4,
    -.983744753048795646e-4, .158088703224912494e-3,   -.210264441724104883e-3,
    .217439618115212643e-3,  -.164318106536763890e-3,  .844182239838527433e-4,
    -.261908384015814087e-4, .368991826595316234e-5};
constexpr double kLanczosC0 = 0.999999999999997092;
constexpr double kSqrt2Pi = 2.5066282746310005;

cplx lanczos_log_gamma(cplx s) {
  cplx tmp = s + kLanczosG;
  tmp = (s + 0.5) * std::log(tmp) - tmp;
  cplx ser = kLanczosC0;
  cplx y = s;
  for (double c : kLanczosCoef) {
    y += 1.0;
    ser += c / y;
  }
  return tmp + std::log(kSqrt2Pi * ser / s);
}

void check_gamma_pole(cplx s) {
  if (s.real() <= 0.0 && std::abs(s.imag()) <= 1e-14) {
    const double nearest = std::round(s.real());
    if (std::abs(s.real() - nearest) <= 1e-14) {
      throw PoleError("Gamma has a pole at s = " + std::to_string(nearest));
    }
  }
}

// ---------------------------------------------------------------------------
// 2F1(1/6, 5/6; 1; w)

constexpr double kA = 1.0 / 6.0;
constexpr double kB = 5.0 / 6.0;
constexpr double kAB = 5.0 / 36.0;
constexpr double kRegionRadius = 0.75;
constexpr double kTaylorRadius = 0.5;
constexpr int kMaxTerms = 4000;
constexpr double kSeriesTol = 1e-17;

const cplx kUpperCenter{0.5, 0.5 * kSqrt3};  // e^{i pi/3}

// Termwise Gauss series sum_n (a)_n (b)_n / ((c)_n n!) v^n and its derivative.
Hyp2F1Value gauss_series(double a, double b, double c, cplx v) {
  if (std::abs(v) >= 1.0) throw ConvergenceError("hypergeometric series argument outside unit disk");
  cplx value = 1.0;
  cplx deriv = 0.0;
  cplx power_prev = 1.0;  // v^{n-1}
  double coef = 1.0;
  int quiet = 0;
  for (int n = 1; n < kMaxTerms; ++n) {
    coef *= (a + n - 1) * (b + n - 1) / ((c + n - 1) * n);
    const cplx dterm = coef * static_cast<double>(n) * power_prev;
    power_prev *= v;
    const cplx term = coef * power_prev;
    value += term;
    deriv += dterm;
    if (std::abs(term) <= kSeriesTol * std::abs(value) &&
        std::abs(dterm) <= kSeriesTol * std::max(std::abs(deriv), 1e-300)) {
      if (++quiet == 2) return {value, deriv};
    } else {
      quiet = 0;
    }
  }
  throw ConvergenceError("hypergeometric series did not converge");
}

// Logarithmic connection formula for c = a + b in t = 1 - w.
Hyp2F1Value log_connection(cplx t) {
  if (std::abs(t) >= 1.0) throw ConvergenceError("log connection needs |1 - w| < 1");
  if (t == cplx(0.0)) throw DomainError("2F1(1/6,5/6;1;w) is singular at w = 1");
  const double prefactor = 1.0 / (2.0 * kPi);  // Gamma(1) / (Gamma(1/6) Gamma(5/6))
  const cplx log_t = principal_log(t);
  double psi_n1 = -kEulerGamma;                                              // psi(n+1)
  double psi_a = -kEulerGamma - 0.5 * kPi * kSqrt3 - 2.0 * kLn2 - 1.5 * kLn3;  // psi(1/6 + n)
  double psi_b = -kEulerGamma + 0.5 * kPi * kSqrt3 - 2.0 * kLn2 - 1.5 * kLn3;  // psi(5/6 + n)
  double coef = 1.0;
  cplx value = 0.0;
  cplx dvalue_dt = -1.0 / t;  // n = 0 derivative term
  cplx power = 1.0;           // t^n
  int quiet = 0;
  for (int n = 0; n < kMaxTerms; ++n) {
    const double h = 2.0 * psi_n1 - psi_a - psi_b;
    const cplx term = coef * (h - log_t) * power;
    value += term;
    cplx dterm = 0.0;
    if (n > 0) {
      const cplx power_prev = power / t;
      dterm = coef * (static_cast<double>(n) * (h - log_t) - 1.0) * power_prev;
      dvalue_dt += dterm;
    }
    if (n > 0 && std::abs(term) <= kSeriesTol * std::abs(value) &&
        std::abs(dterm) <= kSeriesTol * std::abs(dvalue_dt)) {
      if (++quiet == 2) return {prefactor * value, -prefactor * dvalue_dt};
    } else {
      quiet = 0;
    }
    coef *= (kA + n) * (kB + n) / ((n + 1.0) * (n + 1.0));
    psi_n1 += 1.0 / (n + 1.0);
    psi_a += 1.0 / (kA + n);
    psi_b += 1.0 / (kB + n);
    power *= t;
  }
  throw ConvergenceError("log connection series did not converge");
}

// Coefficients of the two-term 1/w and 1/(1-w) continuations:
// Gamma(b-a)/(Gamma(b)Gamma(1-a)) and Gamma(a-b)/(Gamma(a)Gamma(1-b)).
struct InverseCoefficients {
  double k1;
  double k2;
};

const InverseCoefficients& inverse_coefficients() {
  static const InverseCoefficients c = [] {
    const double g56 = std::tgamma(kB);
    const double g16 = std::tgamma(kA);
    return InverseCoefficients{std::tgamma(kB - kA) / (g56 * g56), std::tgamma(kA - kB) / (g16 * g16)};
  }();
  return c;
}

// 2F1 = K1 (-w)^{-a} G1(1/w) + K2 (-w)^{-b} G2(1/w)
Hyp2F1Value inverse_region(cplx w) {
  const auto& k = inverse_coefficients();
  const cplx v = 1.0 / w;
  const Hyp2F1Value g1 = gauss_series(kA, kA, 1.0 + kA - kB, v);
  const Hyp2F1Value g2 = gauss_series(kB, kB, 1.0 + kB - kA, v);
  const cplx log_mw = principal_log(-w);
  const cplx p1 = std::exp(-kA * log_mw);
  const cplx p2 = std::exp(-kB * log_mw);
  const cplx value = k.k1 * p1 * g1.value + k.k2 * p2 * g2.value;
  const cplx deriv = -v * (k.k1 * p1 * (kA * g1.value + v * g1.derivative) +
                           k.k2 * p2 * (kB * g2.value + v * g2.derivative));
  return {value, deriv};
}

// 2F1 = K1 (1-w)^{-a} G1(1/(1-w)) + K2 (1-w)^{-b} G2(1/(1-w))
Hyp2F1Value inverse_complement_region(cplx t) {
  const auto& k = inverse_coefficients();
  const cplx v = 1.0 / t;
  const Hyp2F1Value g1 = gauss_series(kA, kA, 1.0 + kA - kB, v);
  const Hyp2F1Value g2 = gauss_series(kB, kB, 1.0 + kB - kA, v);
  const cplx log_t = principal_log(t);
  const cplx p1 = std::exp(-kA * log_t);
  const cplx p2 = std::exp(-kB * log_t);
  const cplx value = k.k1 * p1 * g1.value + k.k2 * p2 * g2.value;
  const cplx deriv = v * (k.k1 * p1 * (kA * g1.value + v * g1.derivative) +
                          k.k2 * p2 * (kB * g2.value + v * g2.derivative));
  return {value, deriv};
}

// Pfaff: 2F1(a,b;1;w) = (1-w)^{-a} 2F1(a, 1-b; 1; w/(w-1)); here 1-b = a.
Hyp2F1Value pfaff_region(cplx w, cplx t) {
  const cplx v = -w / t;
  const Hyp2F1Value g = gauss_series(kA, kA, 1.0, v);
  const cplx p = std::exp(-kA * principal_log(t));
  const cplx value = p * g.value;
  const cplx deriv = p * (kA * g.value / t - g.derivative / (t * t));
  return {value, deriv};
}

// Power series of the hypergeometric ODE about `center`, given F and F' there.
// Radius of convergence is min(|center|, |1 - center|).
Hyp2F1Value ode_taylor(cplx center, Hyp2F1Value at_center, cplx target) {
  const cplx h = target - center;
  const cplx p0 = center * (1.0 - center);
  const cplx p1 = 1.0 - 2.0 * center;
  const cplx q0 = 1.0 - 2.0 * center;
  constexpr double p2 = -1.0;
  constexpr double q1 = -2.0;
  cplx f_prev = at_center.value;       // f_k
  cplx f_curr = at_center.derivative;  // f_{k+1}
  cplx value = f_prev + f_curr * h;
  cplx deriv = f_curr;
  cplx power = h;  // h^{k+1}
  int quiet = 0;
  for (int k = 0; k < kMaxTerms; ++k) {
    const double kk = k;
    const cplx f_next = -((p1 * (kk * (kk + 1.0)) + q0 * (kk + 1.0)) * f_curr +
                          (p2 * kk * (kk - 1.0) + q1 * kk - kAB) * f_prev) /
                        (p0 * ((kk + 2.0) * (kk + 1.0)));
    const cplx dterm = f_next * (kk + 2.0) * power;
    power *= h;
    const cplx term = f_next * power;
    value += term;
    deriv += dterm;
    f_prev = f_curr;
    f_curr = f_next;
    if (std::abs(term) <= kSeriesTol * std::abs(value) && std::abs(dterm) <= kSeriesTol * std::abs(deriv)) {
      if (++quiet == 2) return {value, deriv};
    } else {
      quiet = 0;
    }
  }
  throw ConvergenceError("ODE Taylor re-expansion did not converge");
}

// F and F' at e^{i pi/3}, stepped out from the Maclaurin disk along the ray.
const Hyp2F1Value& upper_center_value() {
  static const Hyp2F1Value v = [] {
    const cplx w1 = 0.5 * kUpperCenter;
    const cplx w2 = 0.8 * kUpperCenter;
    const Hyp2F1Value at_w1 = gauss_series(kA, kB, 1.0, w1);
    const Hyp2F1Value at_w2 = ode_taylor(w1, at_w1, w2);
    return ode_taylor(w2, at_w2, kUpperCenter);
  }();
  return v;
}

Hyp2F1Value taylor_upper(cplx w) {
  if (std::abs(w - kUpperCenter) >= 1.0) throw ConvergenceError("outside the re-expansion disk");
  return ode_taylor(kUpperCenter, upper_center_value(), w);
}

struct RegionChoice {
  Hyp2F1Region region;
  double ratio;
};

RegionChoice choose_region(cplx w, cplx t) {
  const double aw = std::abs(w);
  const double at = std::abs(t);
  RegionChoice best{Hyp2F1Region::maclaurin, aw};
  auto consider = [&](Hyp2F1Region r, double ratio) {
    if (ratio < best.ratio) best = {r, ratio};
  };
  if (aw <= kRegionRadius) return best;
  if (at <= kRegionRadius) return {Hyp2F1Region::log_connection, at};
  const double du = std::abs(w - kUpperCenter);
  const double dl = std::abs(w - std::conj(kUpperCenter));
  if (du <= kTaylorRadius) return {Hyp2F1Region::taylor_upper, du};
  if (dl <= kTaylorRadius) return {Hyp2F1Region::taylor_lower, dl};
  consider(Hyp2F1Region::log_connection, at);
  consider(Hyp2F1Region::pfaff, aw / at);
  consider(Hyp2F1Region::inverse, 1.0 / aw);
  consider(Hyp2F1Region::inverse_complement, 1.0 / at);
  consider(Hyp2F1Region::taylor_upper, du);
  consider(Hyp2F1Region::taylor_lower, dl);
  return best;
}

}  // namespace

cplx principal_log(cplx z) {
  if (z.imag() == 0.0) {
    if (z.real() < 0.0) return {std::log(-z.real()), kPi};
    return std::log(cplx(z.real(), 0.0));
  }
  return std::log(z);
}

cplx principal_pow(cplx z, cplx p) {
  if (z == cplx(0.0)) return 0.0;
  return std::exp(p * principal_log(z));
}

cplx principal_sqrt(cplx z) {
  if (z.imag() == 0.0) {
    if (z.real() < 0.0) return {0.0, std::sqrt(-z.real())};
    return {std::sqrt(z.real()), 0.0};
  }
  return std::sqrt(z);
}

cplx log_gamma(cplx s) {
  check_gamma_pole(s);
  if (s.real() < 0.5) {
    // Gamma(s) Gamma(1-s) = pi / sin(pi s)
    return std::log(kPi) - std::log(std::sin(kPi * s)) - lanczos_log_gamma(1.0 - s);
  }
  return lanczos_log_gamma(s);
}

cplx gamma_complex(cplx s) {
  check_gamma_pole(s);
  if (s.real() < 0.5) {
    return kPi / (std::sin(kPi * s) * std::exp(lanczos_log_gamma(1.0 - s)));
  }
  return std::exp(lanczos_log_gamma(s));
}

HypergeometricArgument::HypergeometricArgument(cplx w) : w_(w), one_minus_w_(1.0 - w) {
  // 1.0 - (x + 0i) yields a -0 imaginary part; keep the complement on the
  // same side of the cut as w.
  if (one_minus_w_.imag() == 0.0) one_minus_w_.imag(0.0);
}

HypergeometricArgument HypergeometricArgument::from_complement(cplx one_minus_w) {
  cplx w = 1.0 - one_minus_w;
  if (w.imag() == 0.0) w.imag(0.0);
  return HypergeometricArgument(w, one_minus_w);
}

Hyp2F1Region hyp2f1_region(const HypergeometricArgument& arg) {
  return choose_region(arg.w(), arg.one_minus_w()).region;
}

Hyp2F1Value hyp2f1_16_56_1_in_region(const HypergeometricArgument& arg, Hyp2F1Region region) {
  const cplx w = arg.w();
  const cplx t = arg.one_minus_w();
  if (t == cplx(0.0)) throw DomainError("2F1(1/6,5/6;1;w) is singular at w = 1");
  switch (region) {
    case Hyp2F1Region::maclaurin:
      return gauss_series(kA, kB, 1.0, w);
    case Hyp2F1Region::pfaff:
      return pfaff_region(w, t);
    case Hyp2F1Region::log_connection:
      return log_connection(t);
    case Hyp2F1Region::inverse:
      return inverse_region(w);
    case Hyp2F1Region::inverse_complement:
      return inverse_complement_region(t);
    case Hyp2F1Region::taylor_upper:
      return taylor_upper(w);
    case Hyp2F1Region::taylor_lower: {
      // Real parameters: F(conj w) = conj F(w).
      const Hyp2F1Value up = taylor_upper(std::conj(w));
      return {std::conj(up.value), std::conj(up.derivative)};
    }
  }
  throw ConvergenceError("no expansion region applies");
}

Hyp2F1Value hyp2f1_16_56_1_with_derivative(const HypergeometricArgument& arg) {
  return hyp2f1_16_56_1_in_region(arg, hyp2f1_region(arg));
}

BesselOrder::BesselOrder(cplx nu) : nu_(nu) {
  if (!(std::abs(nu.imag()) <= kMaxImag) || !std::isfinite(nu.real())) {
    throw DomainError("Bessel order imaginary part exceeds the supported range");
  }
}

namespace {

struct BesselPair {
  cplx k;
  cplx dk;  // d/dx
};

// K_nu(x) = 1/2 Int exp(-x cosh w + nu w) dw on the line Im w = alpha
// through the saddle sinh w = nu/x, with w = t_c + i alpha + asinh(u).
// Accurate and cheap once x exceeds |Im nu| by a few units.
BesselPair bessel_k_quadrature(cplx nu, double x) {
  const double nu_re = nu.real();
  const double gam = nu.imag();

  const cplx saddle = std::asinh(nu / x);
  const double alpha_cap = 0.5 * kPi - std::min(0.5, 1.0 / (1.0 + std::abs(gam)));
  const double alpha = std::clamp(saddle.imag(), -alpha_cap, alpha_cap);
  const double t_center = saddle.real();
  const double cos_a = std::cos(alpha);
  const double sin_a = std::sin(alpha);
  const double sh_c = std::sinh(t_center);
  const double ch_c = std::cosh(t_center);

  const double h = std::min({0.2, 2.0 * kPi / (x * std::abs(sin_a) + 60.0), 0.5 / std::sqrt(x)});

  cplx sum = 0.0;
  cplx dsum = 0.0;
  double peak = -std::numeric_limits<double>::infinity();
  auto add = [&](double u) {
    const double root = std::sqrt(1.0 + u * u);
    const double t = t_center + std::asinh(u);
    const double ch = ch_c * root + sh_c * u;
    const double sh = sh_c * root + ch_c * u;
    const cplx e(-x * ch * cos_a + nu_re * t - gam * alpha, -x * sh * sin_a + gam * t + nu_re * alpha);
    const cplx f = std::exp(e) / root;
    sum += f;
    dsum -= cplx(ch * cos_a, sh * sin_a) * f;
    peak = std::max(peak, e.real());
    return e.real();
  };

  add(0.0);
  constexpr double kDrop = 41.5;  // integrand < 1e-18 of the peak
  for (int side : {1, -1}) {
    int below = 0;
    for (long k = 1; k < 5'000'000; ++k) {
      if (add(side * k * h) < peak - kDrop) {
        if (++below == 3) break;
      } else {
        below = 0;
      }
    }
  }
  return {0.5 * h * sum, 0.5 * h * dsum};
}

// Below this point the line integral cancels badly and the ODE takes over.
double quadrature_threshold(cplx nu) { return std::abs(nu.imag()) + 10.0; }

// Taylor coefficients of K_nu about c from x^2 y'' + x y' - (x^2 + nu^2) y = 0,
// enough of them to sum at |h| <= radius.
void bessel_taylor_coefficients(cplx nu2, double c, BesselPair at_c, double radius, std::vector<cplx>& a) {
  a.assign({at_c.k, at_c.dk});
  const double c2 = c * c;
  double rk = radius;
  double largest = std::max(std::abs(a[0]), std::abs(a[1]) * radius);
  int quiet = 0;
  for (int k = 0; k < 400; ++k) {
    const double kk = k;
    cplx num = c * (kk + 1.0) * (2.0 * kk + 1.0) * a[k + 1] + (kk * kk - c2 - nu2) * a[k];
    if (k >= 1) num -= 2.0 * c * a[k - 1];
    if (k >= 2) num -= a[k - 2];
    a.push_back(-num / (c2 * (kk + 2.0) * (kk + 1.0)));
    rk *= radius;
    const double mag = std::abs(a.back()) * rk;
    largest = std::max(largest, mag);
    if (mag <= 1e-18 * largest) {
      if (++quiet == 3) return;
    } else {
      quiet = 0;
    }
  }
  throw ConvergenceError("Bessel Taylor step did not converge");
}

BesselPair sum_taylor(const std::vector<cplx>& a, double h) {
  cplx v = 0.0;
  cplx d = 0.0;
  for (std::size_t k = a.size(); k-- > 0;) {
    d = d * h + v;
    v = v * h + a[k];
  }
  return {v, d};
}

// Step size for the backward sweep at center c: a fraction of the distance
// to the singular point 0 and about one radian of local oscillation.
double sweep_step(cplx nu, double c) { return std::min({1.0, 0.5 * c, 1.5 * c / (std::abs(nu) + 1.0)}); }

}  // namespace

cplx bessel_k(BesselOrder order, double x) {
  if (!(x > 0.0)) throw DomainError("bessel_k requires x > 0");
  if (x > 700.0) return 0.0;
  const cplx nu = order.nu();
  const double x0 = quadrature_threshold(nu);
  if (x >= x0) return bessel_k_quadrature(nu, x).k;
  const cplx nu2 = nu * nu;
  BesselPair cur = bessel_k_quadrature(nu, x0);
  double c = x0;
  std::vector<cplx> a;
  for (;;) {
    const double h = sweep_step(nu, c);
    bessel_taylor_coefficients(nu2, c, cur, h, a);
    if (c - h <= x) return sum_taylor(a, x - c).k;
    cur = sum_taylor(a, -h);
    c -= h;
  }
}

BesselKTable::BesselKTable(BesselOrder order, double x_lo) : nu_(order.nu()), x_lo_(x_lo) {
  if (!(x_lo > 0.0)) throw DomainError("table range must be positive");
  x_hi_ = quadrature_threshold(nu_);
  if (x_lo_ >= x_hi_) return;
  const cplx nu2 = nu_ * nu_;
  BesselPair cur = bessel_k_quadrature(nu_, x_hi_);
  double c = x_hi_;
  std::vector<cplx> a;
  for (;;) {
    const double h = sweep_step(nu_, c);
    bessel_taylor_coefficients(nu2, c, cur, h, a);
    nodes_.push_back({c, h, a});
    if (c - h <= x_lo_) break;
    cur = sum_taylor(a, -h);
    c -= h;
  }
  std::reverse(nodes_.begin(), nodes_.end());
}

cplx BesselKTable::operator()(double x) const {
  if (!(x > 0.0)) throw DomainError("bessel_k requires x > 0");
  if (x >= x_hi_ || x < x_lo_ || nodes_.empty()) return bessel_k(BesselOrder(nu_), x);
  // nodes_ ascending by center; each covers [center - step, center].
  auto it = std::lower_bound(nodes_.begin(), nodes_.end(), x,
                             [](const Node& n, double v) { return n.center < v; });
  if (it == nodes_.end()) --it;
  return sum_taylor(it->coefficients, x - it->center).k;
}

}  // namespace rzspec::special
