#include "oracles.hpp"

#include <boost/math/constants/constants.hpp>
#include <boost/math/special_functions/bernoulli.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_complex.hpp>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace oracle {

namespace mp = boost::multiprecision;
using real50 = mp::cpp_bin_float_50;
using cplx50 = mp::cpp_complex_50;
using real100 = mp::cpp_bin_float_100;
using cplx100 = mp::cpp_complex_100;

namespace {

template <class C>
cplx to_double(const C& z) {
  return {static_cast<double>(z.real()), static_cast<double>(z.imag())};
}

}  // namespace

cplx log_gamma(cplx s_in) {
  if (!(s_in.real() > 0.0)) throw std::domain_error("oracle::log_gamma needs Re s > 0");
  cplx50 z(s_in.real(), s_in.imag());
  cplx50 shift = 0;
  while (z.real() < 40) {
    shift += log(z);
    z += 1;
  }
  const real50 half_log_2pi = log(boost::math::constants::two_pi<real50>()) / 2;
  cplx50 sum = (z - real50(0.5)) * log(z) - z + half_log_2pi;
  cplx50 zpow = z;
  const cplx50 z2 = z * z;
  for (int k = 1; k <= 30; ++k) {
    const real50 b = boost::math::bernoulli_b2n<real50>(k);
    sum += b / (real50(2 * k) * real50(2 * k - 1) * zpow);
    zpow *= z2;
  }
  return to_double(sum - shift);
}

Hyp hyp2f1_16_56_1(cplx w_in) {
  const real50 a = real50(1) / 6;
  const real50 b = real50(5) / 6;
  const real50 c = 1;
  const cplx50 w(w_in.real(), w_in.imag());
  const real50 tiny = real50("1e-55");
  if (w_in.imag() == 0.0 && w_in.real() >= 1.0) throw std::domain_error("oracle::hyp2f1 on the cut");

  auto maclaurin = [&](const cplx50& x, cplx50& f, cplx50& df) {
    cplx50 term = 1;  // coefficient times x^n
    f = 1;
    df = 0;
    for (int n = 0; n < 4000; ++n) {
      const real50 ratio = (a + n) * (b + n) / ((c + n) * real50(n + 1));
      // d/dx of the (n+1)-th term equals (n+1) * coefficient * x^n.
      df += term * ratio * real50(n + 1);
      term *= ratio * x;
      f += term;
      if (abs(term) < tiny * abs(f) && n > 10) break;
    }
  };

  const double r = std::abs(w_in);
  if (r <= 0.5) {
    cplx50 f, df;
    maclaurin(w, f, df);
    return {to_double(f), to_double(df)};
  }
  const cplx50 dir = w / abs(w);
  cplx50 cur = dir * real50(0.5);
  cplx50 f, df;
  maclaurin(cur, f, df);
  const real50 ab = a * b;
  const real50 q1 = -(a + b + 1);
  for (int step = 0; step < 100000; ++step) {
    const real50 remaining = abs(w - cur);
    if (remaining == 0) break;
    const real50 dist = (std::min)(abs(cur), abs(cplx50(1) - cur));
    const real50 len = (std::min)(dist / 2, remaining);
    const cplx50 next = len == remaining ? w : cur + dir * len;
    const cplx50 h = next - cur;
    const cplx50 p0 = cur * (cplx50(1) - cur);
    const cplx50 p1 = cplx50(1) - cur * real50(2);
    const cplx50 q0 = cplx50(c) + q1 * cur;
    std::vector<cplx50> coef{f, df};
    cplx50 value = f + df * h;
    cplx50 deriv = df;
    cplx50 hk = h;  // h^(k+1) for the coefficient index k+2 below
    for (int k = 0; k < 2000; ++k) {
      const cplx50 next_coef =
          -((p1 * real50(k) + q0) * real50(k + 1) * coef[k + 1] + (real50(-k * (k - 1)) + q1 * real50(k) - ab) * coef[k]) /
          (p0 * real50(k + 2) * real50(k + 1));
      coef.push_back(next_coef);
      deriv += next_coef * real50(k + 2) * hk;
      hk *= h;
      const cplx50 term = next_coef * hk;
      value += term;
      if (k > 10 && abs(term) < tiny * abs(value) && abs(coef[k + 1] * hk) < tiny * abs(value)) break;
    }
    f = value;
    df = deriv;
    cur = next;
  }
  return {to_double(f), to_double(df)};
}

cplx bessel_k(cplx nu_in, double x_in) {
  if (!(x_in > 0.0)) throw std::domain_error("oracle::bessel_k needs x > 0");
  const cplx100 nu(nu_in.real(), nu_in.imag());
  const real100 x = x_in;
  // The step has to resolve both cos(Im nu t) and the peak of width ~ x^{-1/2}.
  const double h_d = std::min(9.0 / (3.1 * std::abs(nu_in.imag()) + 3.0 * std::abs(nu_in.real()) + 80.0),
                              0.35 / std::sqrt(x_in));
  const real100 h = h_d;
  const double re_nu = std::abs(nu_in.real());
  auto f = [&](const real100& t) {
    const cplx100 ch = (exp(nu * t) + exp(-nu * t)) / 2;
    return cplx100(exp(-x * cosh(t))) * ch;
  };
  cplx100 sum = f(real100(0)) / 2;
  for (long k = 1;; ++k) {
    const real100 t = h * k;
    sum += f(t);
    const double td = static_cast<double>(t);
    if (x_in * std::cosh(td) - re_nu * td - x_in > 260.0) break;
  }
  return to_double(sum * h);
}

cplx zeta(cplx s_in) {
  if (!(s_in.real() > 0.0)) throw std::domain_error("oracle::zeta needs Re s > 0");
  const cplx100 s(s_in.real(), s_in.imag());
  constexpr int n = 220;
  // d_k = n sum_{i<=k} (n+i-1)! 4^i / ((n-i)! (2i)!)
  std::vector<real100> d(n + 1);
  real100 term = real100(1) / n;  // i = 0: (n-1)!/n! = 1/n
  real100 acc = term;
  d[0] = n * acc;
  for (int i = 1; i <= n; ++i) {
    term *= real100(4) * real100(n + i - 1) * real100(n - i + 1) / (real100(2 * i) * real100(2 * i - 1));
    acc += term;
    d[i] = n * acc;
  }
  cplx100 sum = 0;
  for (int k = 0; k < n; ++k) {
    const cplx100 p = exp(-s * log(real100(k + 1)));
    const real100 weight = d[k] - d[n];
    sum += (k % 2 == 0 ? weight : -weight) * p;
  }
  const cplx100 eta = -sum / d[n];
  const cplx100 factor = cplx100(1) - exp((cplx100(1) - s) * log(real100(2)));
  return to_double(eta / factor);
}

cplx hurwitz_zeta(cplx s_in, double a_in) {
  if (!(s_in.real() > 1.0)) throw std::domain_error("oracle::hurwitz_zeta needs Re s > 1");
  const cplx50 s(s_in.real(), s_in.imag());
  const real50 a = a_in;
  constexpr int n_terms = 2000;
  cplx50 sum = 0;
  for (int n = 0; n < n_terms; ++n) sum += exp(-s * log(a + n));
  const real50 big = a + n_terms;
  const cplx50 big_pow = exp(-s * log(big));
  sum += big_pow * big / (s - real50(1)) + big_pow / 2;
  cplx50 rising = s;  // s (s+1) ... (s + 2j - 2)
  cplx50 power = big_pow / big;
  real50 factorial = 2;
  for (int j = 1; j <= 3; ++j) {
    sum += boost::math::bernoulli_b2n<real50>(j) / factorial * rising * power;
    rising *= (s + real50(2 * j - 1)) * (s + real50(2 * j));
    power /= big * big;
    factorial *= real50(2 * j + 1) * real50(2 * j + 2);
  }
  return to_double(sum);
}

double e4_at_i() {
  const real50 g = boost::math::tgamma(real50(1) / 4);
  const real50 two_pi = boost::math::constants::two_pi<real50>();
  return static_cast<double>(3 * pow(g, 8) / pow(two_pi, 6));
}

double e6_at_rho() {
  const real50 g = boost::math::tgamma(real50(1) / 3);
  const real50 pi = boost::math::constants::pi<real50>();
  return static_cast<double>(27 * pow(g, 18) / (512 * pow(pi, 12)));
}

cplx e4_lattice(cplx tau_in, int radius) {
  using ld = long double;
  using cld = std::complex<long double>;
  const cld tau(tau_in.real(), tau_in.imag());
  auto partial = [&](int r) {
    // Shell by shell so each shell sums numbers of similar size.
    cld total = 0;
    cld last = 0;
    for (int k = r; k >= 1; --k) {
      cld shell = 0;
      for (int n = -k; n <= k; ++n) {
        const cld top = ld(k) * tau + ld(n);
        shell += ld(2) / (top * top * top * top);
      }
      for (int m = -k + 1; m <= k - 1; ++m) {
        const cld side = ld(m) * tau + ld(k);
        shell += ld(2) / (side * side * side * side);
      }
      if (k == r) last = shell;
      total += shell;
    }
    // Dropping half of the outermost shell leaves only even powers of 1/R.
    return total - last / ld(2);
  };
  const cld s1 = partial(radius);
  const cld s2 = partial(2 * radius);
  const cld s4 = partial(4 * radius);
  // S(R) = S + c2 / R^2 + c4 / R^4 + ...
  const cld r1 = (ld(4) * s2 - s1) / ld(3);
  const cld r2 = (ld(4) * s4 - s2) / ld(3);
  const cld g4 = (ld(16) * r2 - r1) / ld(15);
  const ld pi = 3.14159265358979323846264338327950288L;
  const ld zeta4 = pi * pi * pi * pi / ld(90);
  const cld e4 = g4 / (ld(2) * zeta4);
  return {static_cast<double>(e4.real()), static_cast<double>(e4.imag())};
}

}  // namespace oracle
