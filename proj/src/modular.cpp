#include "rzspec/modular.hpp"

#include <array>
#include <cmath>

#include "rzspec/error.hpp"
#include "rzspec/special_functions.hpp"

namespace rzspec::modular {

using special::kPi;

namespace {

constexpr int kTableSize = 96;
constexpr int kMaxReductionSteps = 100000;

struct DivisorSums {
  std::array<double, kTableSize + 1> sigma3{};
  std::array<double, kTableSize + 1> sigma5{};
};

const DivisorSums& divisor_sums() {
  static const DivisorSums table = [] {
    DivisorSums t;
    for (int d = 1; d <= kTableSize; ++d) {
      const double d3 = double(d) * d * d;
      for (int m = d; m <= kTableSize; m += d) {
        t.sigma3[m] += d3;
        t.sigma5[m] += d3 * d * d;
      }
    }
    return t;
  }();
  return table;
}

cplx nome(cplx tau) { return std::exp(cplx(0.0, 2.0 * kPi) * tau); }

// q-expansions at a point with Im tau large enough for the table.
EisensteinPair eisenstein_series_at(cplx tau) {
  const auto& t = divisor_sums();
  const cplx q = nome(tau);
  const double aq = std::abs(q);
  cplx s3 = 0.0;
  cplx s5 = 0.0;
  cplx qn = 1.0;
  double aqn = 1.0;
  for (int n = 1;; ++n) {
    if (n > kTableSize) throw ConvergenceError("q-series needs more terms than tabulated; reduce tau first");
    qn *= q;
    aqn *= aq;
    s3 += t.sigma3[n] * qn;
    s5 += t.sigma5[n] * qn;
    const double n5 = double(n) * n * n * n * n;
    if (aqn * n5 < 1e-16) break;
  }
  return {1.0 + 240.0 * s3, 1.0 - 504.0 * s5};
}

cplx delta_at(cplx tau) {
  const cplx q = nome(tau);
  cplx prod = 1.0;
  cplx qn = 1.0;
  for (int n = 1; n <= 10000; ++n) {
    qn *= q;
    if (std::abs(qn) < 1e-18) break;
    prod *= 1.0 - qn;
  }
  const cplx p2 = prod * prod;
  const cplx p4 = p2 * p2;
  const cplx p8 = p4 * p4;
  return q * p8 * p8 * p8;
}

}  // namespace

UpperHalfPoint::UpperHalfPoint(cplx tau) : tau_(tau) {
  if (!(tau.imag() > 0.0) || !std::isfinite(tau.real()) || !std::isfinite(tau.imag())) {
    throw DomainError("tau must lie in the upper half plane");
  }
}

bool in_fundamental_domain(cplx tau, double slack) {
  return std::abs(tau.real()) <= 0.5 + slack && std::norm(tau) >= 1.0 - slack;
}

ModularReduction fundamental_reduce(UpperHalfPoint point) {
  cplx tau = point.tau();
  ModularMatrix m;
  std::vector<Generator> word;
  for (int step = 0; step < kMaxReductionSteps; ++step) {
    const double shift = std::floor(tau.real() + 0.5);
    if (shift != 0.0) {
      const auto k = static_cast<long long>(shift);
      tau -= shift;
      m = ModularMatrix::translation(-k) * m;
      word.insert(word.end(), static_cast<std::size_t>(k > 0 ? k : -k), k > 0 ? Generator::T_inverse : Generator::T);
    }
    if (std::norm(tau) < 1.0 - 1e-15) {
      tau = -1.0 / tau;
      m = ModularMatrix::inversion() * m;
      word.push_back(Generator::S);
    } else {
      return {UpperHalfPoint(tau), std::move(word), m};
    }
  }
  throw ConvergenceError("fundamental-domain reduction did not terminate");
}

EisensteinPair eisenstein_e4_e6(UpperHalfPoint tau) {
  const ModularReduction red = fundamental_reduce(tau);
  EisensteinPair e = eisenstein_series_at(red.tau_reduced.tau());
  if (red.matrix == ModularMatrix::identity()) return e;
  const cplx j = red.matrix.automorphy(tau.tau());
  const cplx j2 = j * j;
  const cplx j4 = j2 * j2;
  return {e.e4 / j4, e.e6 / (j4 * j2)};
}

cplx delta_product(UpperHalfPoint tau) { return delta_at(tau.tau()); }

cplx z_of_tau(UpperHalfPoint tau) {
  const cplx t = fundamental_reduce(tau).tau_reduced.tau();
  const EisensteinPair e = eisenstein_series_at(t);
  return -e.e6 * e.e6 / (1728.0 * delta_at(t));
}

cplx dz_dtau(UpperHalfPoint tau) {
  const ModularReduction red = fundamental_reduce(tau);
  const cplx t = red.tau_reduced.tau();
  const EisensteinPair e = eisenstein_series_at(t);
  const cplx reduced = cplx(0.0, 2.0 * kPi) * e.e4 * e.e4 * e.e6 / (1728.0 * delta_at(t));
  // z(g tau) = z(tau) gives z'(tau) = z'(g tau) / (c tau + d)^2.
  const cplx j = red.matrix.automorphy(tau.tau());
  return reduced / (j * j);
}

HypergeometricTau tau_of_z_hypergeometric(cplx z) {
  if (z == cplx(0.0) || z == cplx(1.0)) throw SingularInputError("tau(z) is not defined at z = 0 or z = 1");
  const cplx zm1 = z - 1.0;
  const cplx u = special::principal_sqrt(z / zm1);
  const cplx w1 = 0.5 * (1.0 + u);
  // 1 - w1 = (1 - u^2) / (2 (1 + u)) without cancellation; Re u >= 0.
  const cplx w2 = -1.0 / (zm1 * 2.0 * (1.0 + u));

  auto argument = [](cplx w, cplx complement) {
    return std::abs(complement) < std::abs(w) ? special::HypergeometricArgument::from_complement(complement)
                                              : special::HypergeometricArgument(w);
  };
  const auto f1 = special::hyp2f1_16_56_1_with_derivative(argument(w1, w2));
  const auto f2 = special::hyp2f1_16_56_1_with_derivative(argument(w2, w1));
  const cplx i(0.0, 1.0);
  const cplx tau = i * f1.value / f2.value;
  const cplx dw1_dz = -1.0 / (4.0 * u * zm1 * zm1);
  const cplx dtau = i * (f1.derivative * f2.value + f1.value * f2.derivative) / (f2.value * f2.value) * dw1_dz;
  return {tau, dtau};
}

UpperHalfPoint tau_of_z(cplx z) {
  const cplx tau = tau_of_z_hypergeometric(z).tau;
  if (!(tau.imag() > 0.0)) throw ConvergenceError("hypergeometric ratio left the upper half plane");
  return fundamental_reduce(UpperHalfPoint(tau)).tau_reduced;
}

Uniformization uniformize(cplx z) {
  const UpperHalfPoint tau = tau_of_z(z);
  const cplx d = dz_dtau(tau);
  return {tau, d, tau.y() * std::abs(d)};
}

GeometricPotentialValue potential_v(cplx z) {
  if (z == cplx(0.0) || z == cplx(1.0)) return {0.0, z};
  const double s = uniformize(z).scale;
  return {s * s, z};
}

double potential_v_hypergeometric(cplx z) {
  if (z == cplx(0.0) || z == cplx(1.0)) return 0.0;
  const HypergeometricTau h = tau_of_z_hypergeometric(z);
  const double s = h.tau.imag() / std::abs(h.dtau_dz);
  return s * s;
}

}  // namespace rzspec::modular
