#include "rzspec/lfunctions.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "rzspec/error.hpp"
#include "rzspec/special_functions.hpp"

namespace rzspec::lfunctions {

using special::kPi;

namespace {

constexpr int kMaxBernoulli = 30;

// B_{2j} / (2j)! = (-1)^{j+1} 2 zeta(2j) / (2 pi)^{2j}, j = 1..kMaxBernoulli.
const std::array<double, kMaxBernoulli + 1>& bernoulli_over_factorial() {
  static const auto table = [] {
    std::array<double, kMaxBernoulli + 1> t{};
    for (int j = 1; j <= kMaxBernoulli; ++j) {
      double z2j = 0.0;
      if (j == 1) {
        z2j = kPi * kPi / 6.0;
      } else if (j == 2) {
        z2j = std::pow(kPi, 4) / 90.0;
      } else {
        for (int k = 2000; k >= 1; --k) z2j += std::pow(static_cast<double>(k), -2.0 * j);
      }
      const double sign = (j % 2 == 1) ? 1.0 : -1.0;
      t[j] = sign * 2.0 * z2j / std::pow(2.0 * kPi, 2.0 * j);
    }
    return t;
  }();
  return table;
}

// (e^w - 1) / w, accurate for small w.
cplx expm1_over(cplx w) {
  if (std::abs(w) < 1e-3) {
    return 1.0 + w / 2.0 * (1.0 + w / 3.0 * (1.0 + w / 4.0 * (1.0 + w / 5.0)));
  }
  return (std::exp(w) - 1.0) / w;
}

// Euler-Maclaurin for zeta(s, a). With drop_pole the term 1/(s-1) is
// subtracted, which leaves a function regular at s = 1.
cplx hurwitz_em(cplx s, double a, bool drop_pole) {
  const double abs_s = std::abs(s);
  const int n_direct = static_cast<int>(std::ceil((abs_s + 2.0 * kMaxBernoulli) / kPi)) + 1;
  cplx sum = 0.0;
  for (int k = n_direct - 1; k >= 0; --k) {
    sum += std::exp(-s * std::log(k + a));
  }
  const double big_n = n_direct + a;
  const double log_n = std::log(big_n);
  const cplx n_pow = std::exp(-s * log_n);  // (N+a)^{-s}
  // (N+a)^{1-s} / (s-1), optionally minus 1/(s-1)
  cplx tail;
  if (drop_pole) {
    tail = -log_n * expm1_over(-(s - 1.0) * log_n);
  } else {
    tail = big_n * n_pow / (s - 1.0);
  }
  sum += tail + 0.5 * n_pow;

  const auto& bern = bernoulli_over_factorial();
  cplx rising = s;                  // s (s+1) ... (s+2j-2)
  cplx power = n_pow / big_n;       // (N+a)^{-s-2j+1}
  const double inv_n2 = 1.0 / (big_n * big_n);
  for (int j = 1; j <= kMaxBernoulli; ++j) {
    const cplx term = bern[j] * rising * power;
    sum += term;
    if (std::abs(term) <= 1e-17 * std::abs(sum)) break;
    rising *= (s + (2.0 * j - 1.0)) * (s + 2.0 * j);
    power *= inv_n2;
  }
  return sum;
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

ZetaZero::ZetaZero(int index, cplx rho) : index_(index), rho_(rho) {
  if (index < 1) throw DomainError("zero index must be positive");
  if (!(rho.real() > 0.0 && rho.real() < 1.0)) throw DomainError("non-trivial zeros satisfy 0 < Re rho < 1");
  if (!(rho.imag() > 0.0)) throw DomainError("zeros are indexed with Im rho > 0");
}

ZetaZero ZetaZero::on_critical_line(int index, double gamma) { return ZetaZero(index, cplx(0.5, gamma)); }

DirichletCharacter::DirichletCharacter(int modulus) : modulus_(modulus) {
  if (modulus != 3 && modulus != 4) throw DomainError("only chi_{-3} and chi_{-4} are supported");
}

int DirichletCharacter::operator()(long long n) const noexcept {
  const long long r = ((n % modulus_) + modulus_) % modulus_;
  if (r == 1) return 1;
  if (r == modulus_ - 1) return -1;
  return 0;
}

cplx hurwitz_zeta(cplx s, double a) {
  if (!(a > 0.0 && a <= 1.0)) throw DomainError("Hurwitz zeta needs a in (0, 1]");
  if (s == cplx(1.0)) throw PoleError("Hurwitz zeta has a pole at s = 1");
  return hurwitz_em(s, a, false);
}

cplx zeta(cplx s) {
  if (s == cplx(1.0)) throw PoleError("zeta has a pole at s = 1");
  if (s.real() >= 0.0) return hurwitz_em(s, 1.0, false);
  // zeta(s) = 2^s pi^{s-1} sin(pi s / 2) Gamma(1 - s) zeta(1 - s)
  const cplx one_minus = 1.0 - s;
  const cplx factor = std::exp(s * std::log(2.0) + (s - 1.0) * std::log(kPi) + special::log_gamma(one_minus));
  return factor * std::sin(0.5 * kPi * s) * hurwitz_em(one_minus, 1.0, false);
}

cplx dirichlet_l(const DirichletCharacter& chi, cplx s) {
  const int m = chi.modulus();
  cplx sum = 0.0;
  // sum_r chi(r) = 0, so the dropped 1/(s-1) terms cancel and s = 1 is regular.
  for (int r = 1; r < m; ++r) {
    const int c = chi(r);
    if (c != 0) sum += static_cast<double>(c) * hurwitz_em(s, static_cast<double>(r) / m, true);
  }
  return std::exp(-s * std::log(static_cast<double>(m))) * sum;
}

cplx xi_completed(cplx s) {
  const cplx w = (s.real() < 0.5) ? 1.0 - s : s;
  if (w == cplx(1.0)) throw PoleError("completed zeta has poles at s = 0 and s = 1");
  return std::exp(special::log_gamma(0.5 * w) - 0.5 * w * std::log(kPi)) * zeta(w);
}

cplx riemann_xi(cplx s) {
  if (s == cplx(0.0) || s == cplx(1.0)) return 0.5;
  return 0.5 * s * (s - 1.0) * xi_completed(s);
}

double critical_line_function(double t) {
  return xi_completed(cplx(0.5, t)).real() * std::exp(0.25 * kPi * t);
}

int count_sign_changes(double t_lo, double t_hi, double step) {
  int count = 0;
  double prev = critical_line_function(t_lo);
  const auto steps = static_cast<long>(std::ceil((t_hi - t_lo) / step));
  for (long k = 1; k <= steps; ++k) {
    const double t = std::min(t_hi, t_lo + k * step);
    const double cur = critical_line_function(t);
    if ((prev < 0.0) != (cur < 0.0)) ++count;
    prev = cur;
  }
  return count;
}

std::vector<ZetaZero> find_zeros(int count, const ZeroSearchOptions& options) {
  if (count < 0) throw DomainError("zero count must be non-negative");
  if (count > options.max_count) {
    throw ResourceError("requested " + std::to_string(count) + " zeros; maximum is " +
                        std::to_string(options.max_count));
  }
  std::vector<ZetaZero> zeros;
  zeros.reserve(count);
  double t_prev = 0.0;
  double f_prev = critical_line_function(t_prev);
  for (long k = 1; static_cast<int>(zeros.size()) < count; ++k) {
    const double t = k * options.step;
    if (t > options.t_max) {
      throw SearchExhaustedError("found only " + std::to_string(zeros.size()) + " zeros below t = " +
                                 std::to_string(options.t_max));
    }
    const double f = critical_line_function(t);
    if ((f_prev < 0.0) != (f < 0.0)) {
      double lo = t_prev;
      double hi = t;
      double f_lo = f_prev;
      while (hi - lo > options.bisection_tol) {
        const double mid = 0.5 * (lo + hi);
        const double f_mid = critical_line_function(mid);
        if ((f_mid < 0.0) == (f_lo < 0.0)) {
          lo = mid;
          f_lo = f_mid;
        } else {
          hi = mid;
        }
      }
      zeros.push_back(ZetaZero::on_critical_line(static_cast<int>(zeros.size()) + 1, 0.5 * (lo + hi)));
    }
    t_prev = t;
    f_prev = f;
  }
  return zeros;
}

std::vector<ZetaZero> parse_zeros(const std::string& text) {
  std::vector<ZetaZero> zeros;
  std::istringstream in(text);
  std::string raw;
  std::size_t line_no = 0;
  double last = 0.0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    double value = 0.0;
    const char* begin = line.data();
    const char* end = begin + line.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end) throw ParseError(line_no, "not a decimal number: '" + line + "'");
    if (!std::isfinite(value) || value <= 0.0) throw ParseError(line_no, "gamma must be positive and finite");
    if (!zeros.empty() && value <= last) {
      throw OrderingError(line_no, value == last ? "duplicate zero" : "zeros must be strictly increasing");
    }
    last = value;
    zeros.push_back(ZetaZero::on_critical_line(static_cast<int>(zeros.size()) + 1, value));
  }
  return zeros;
}

std::vector<ZetaZero> ingest_zeros(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DomainError("cannot open zeros file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_zeros(buffer.str());
}

std::string format_zeros(const std::vector<ZetaZero>& zeros) {
  std::string out;
  char buf[64];
  for (const auto& z : zeros) {
    std::snprintf(buf, sizeof buf, "%.17g\n", z.gamma());
    out += buf;
  }
  return out;
}

}  // namespace rzspec::lfunctions
