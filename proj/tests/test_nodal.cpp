#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "rzspec/error.hpp"
#include "rzspec/lfunctions.hpp"
#include "rzspec/modular.hpp"
#include "rzspec/nodal.hpp"

using namespace rzspec;
using nodal::cplx;
using nodal::EndpointLabel;
using nodal::NodalLine;
using wavefield::GridField;
using wavefield::Window;

namespace {

const lfunctions::ZetaZero& zero(int n) {
  static const auto zeros = lfunctions::find_zeros(5);
  return zeros[n - 1];
}

GridField sample(double (*f)(cplx), const Window& w, int n) {
  return wavefield::evaluate_function_grid([f](cplx z) { return cplx(f(z), 0.0); }, w, n, n, 0);
}

bool on_boundary(cplx p, const Window& w, double tol) {
  return std::abs(p.real() - w.xmin) < tol || std::abs(p.real() - w.xmax) < tol ||
         std::abs(p.imag() - w.ymin) < tol || std::abs(p.imag() - w.ymax) < tol;
}

}  // namespace

TEST_CASE("saddle at the origin gives four rays ending at z = 0") {
  const Window w{-1.0, 1.0, -1.0, 1.0};
  const auto field = sample([](cplx z) { return z.real() * z.real() - z.imag() * z.imag(); }, w, 101);
  nodal::NodalOptions opt;
  opt.tolerance = 1e-12;
  const auto lines = nodal::extract_nodal_lines(field, opt);
  REQUIRE(lines.size() == 4);
  for (const auto& l : lines) {
    CHECK_FALSE(l.closed);
    const bool starts = l.endpoints_on[0] == EndpointLabel::z0;
    const bool ends = l.endpoints_on[1] == EndpointLabel::z0;
    CHECK(starts != ends);
    const cplx free_end = starts ? l.points.back() : l.points.front();
    CHECK(on_boundary(free_end, w, 1e-12));
    for (cplx p : l.points) CHECK(std::abs(std::abs(p.real()) - std::abs(p.imag())) < 1e-12);
  }
}

TEST_CASE("an ellipse through both wells is the first scenario") {
  const Window w{-0.5, 1.5, -1.0, 1.0};
  auto f = [](cplx z) {
    const double u = (z.real() - 0.5) / 0.5;
    const double v = z.imag() / 0.4;
    return u * u + v * v - 1.0;
  };
  nodal::NodalOptions opt;
  opt.refine = f;
  const auto lines = nodal::extract_nodal_lines(sample(f, w, 161), opt);
  const auto report = nodal::classify_nodal_scenario(lines);
  CHECK(report.scenario == nodal::Scenario::first);
  CHECK(report.label() == "scenario 1");
  CHECK(report.arcs_z0_z1 == 2);
  for (const auto& l : lines) {
    CHECK(l.self_intersections == 0);
    // Bridged vertices next to the wells are only O(h^2) accurate.
    CHECK(l.max_abs_field < 1e-2);
    for (cplx p : l.points) {
      if (std::abs(p) > 0.05 && std::abs(p - 1.0) > 0.05) CHECK(std::abs(f(p)) < 1e-10);
    }
  }
  const auto loops = nodal::assemble_closed_loops(lines);
  REQUIRE(loops.size() == 1);
  CHECK(loops[0].closed);
  CHECK(std::abs(std::abs(nodal::signed_area(loops[0].points)) - M_PI * 0.5 * 0.4) < 1e-3);
}

TEST_CASE("separate loops at each well are the second scenario") {
  const Window w{-1.0, 2.0, -1.0, 1.0};
  auto f = [](cplx z) { return (std::norm(z + 0.3) - 0.09) * (std::norm(z - 1.4) - 0.16); };
  const auto lines = nodal::extract_nodal_lines(sample(f, w, 151));
  const auto report = nodal::classify_nodal_scenario(lines);
  CHECK(report.scenario == nodal::Scenario::second);
  CHECK(report.loops_z0 == 1);
  CHECK(report.loops_z1 == 1);
  for (const auto& l : lines) {
    CHECK(l.closed);
    CHECK(l.endpoints_on[0] == l.endpoints_on[1]);
  }
  CHECK(nodal::assemble_closed_loops(lines).size() == 2);
}

TEST_CASE("a free circle and the other scenario") {
  const Window w{-1.0, 2.0, -1.0, 2.0};
  const auto lines = nodal::extract_nodal_lines(sample([](cplx z) { return std::norm(z - cplx(0.5, 1.0)) - 0.09; }, w, 121));
  REQUIRE(lines.size() == 1);
  CHECK(lines[0].closed);
  CHECK(lines[0].endpoints_on[0] == EndpointLabel::open);
  const auto report = nodal::classify_nodal_scenario(lines);
  CHECK(report.scenario == nodal::Scenario::other);
  CHECK(report.closed_free == 1);
  CHECK(nodal::to_string(EndpointLabel::z1) == "z1");
}

TEST_CASE("complex fields are rejected") {
  const Window w{-1.0, 1.0, -1.0, 1.0};
  const auto field =
      wavefield::evaluate_function_grid([](cplx z) { return cplx(z.real(), 0.5 * z.imag() + 0.2); }, w, 21, 21, 0);
  CHECK_THROWS_AS(nodal::extract_nodal_lines(field), PhaseResidualError);
  // A small imaginary part passes the global check but not the line check.
  const auto slight =
      wavefield::evaluate_function_grid([](cplx z) { return cplx(z.real() - 0.3, 1e-3); }, w, 21, 21, 0);
  CHECK_THROWS_AS(nodal::extract_nodal_lines(slight), PhaseResidualError);
}

TEST_CASE("cross detection") {
  const auto exact = nodal::detect_cross([](cplx eta) { return (eta * eta + std::conj(eta * eta)).real(); }, 1e-2);
  REQUIRE(exact.angles_deg.size() == 4);
  for (int k = 0; k < 4; ++k) CHECK(std::abs(exact.angles_deg[k] - (45.0 + 90.0 * k)) < 1e-9);
  CHECK(exact.is_cross);
  const auto none = nodal::detect_cross([](cplx) { return 1.0; }, 1e-2);
  CHECK(none.angles_deg.empty());
  CHECK_FALSE(none.is_cross);
  const auto tilted = nodal::detect_cross([](cplx eta) { return (eta * eta).imag(); }, 1e-2);
  CHECK_FALSE(tilted.is_cross);

  for (int n = 1; n <= 5; ++n) {
    const wavefield::WaveFunction wave(zero(n));
    for (double r : {5e-3, 1e-2, 2e-2}) {
      CAPTURE(n);
      CAPTURE(r);
      CHECK(nodal::detect_cross_at_i(wave, r).is_cross);
    }
  }
  const wavefield::WaveFunction wave(zero(1));
  CHECK_THROWS_AS(nodal::detect_cross_at_i(wave, 1e-4), DomainError);
  CHECK_THROWS_AS(nodal::detect_cross_at_i(wave, 0.06), DomainError);
}

TEST_CASE("flux and mass") {
  const Window w{-1.5, 1.5, -1.5, 1.5};
  NodalLine circle;
  for (int k = 0; k <= 400; ++k) circle.points.push_back(std::polar(1.0, 2 * M_PI * k / 400));
  circle.points.back() = circle.points.front();
  circle.closed = true;

  const auto ones = wavefield::evaluate_function_grid([](cplx) { return cplx(1.0); }, w, 301, 301, 0);
  CHECK(std::abs(nodal::enclosed_mass(ones, circle) - M_PI) < 2e-2);

  // A real field carries no current.
  auto real_g = [](cplx z) { return cplx(std::norm(z) - 1.0 + 0.3 * z.real(), 0.0); };
  CHECK(std::abs(nodal::boundary_flux(real_g, circle, 1e-3)) < 1e-14);

  // Control: g = exp((a + ib) x) has div J = 4ab |g|^2.
  const double a = 0.7;
  const double b = 1.3;
  auto g = [&](cplx z) { return std::exp(cplx(a, b) * z.real()); };
  const auto psi = wavefield::evaluate_function_grid(g, w, 301, 301, 0);
  const auto report = nodal::flux_integral(g, psi, circle);
  CHECK(std::abs(report.im_e_bound - 2 * a * b) < 0.02 * 2 * a * b);
  CHECK(report.mass > 0.0);
  // Orientation does not change the outward flux.
  NodalLine reversed = circle;
  std::reverse(reversed.points.begin(), reversed.points.end());
  CHECK(std::abs(nodal::boundary_flux(g, reversed, 1e-3) - nodal::boundary_flux(g, circle, 1e-3)) < 1e-12);

  NodalLine open = circle;
  open.points.pop_back();
  open.closed = false;
  CHECK_THROWS_AS(nodal::boundary_flux(g, open, 1e-3), OpenLoopError);
  NodalLine far;
  for (int k = 0; k <= 40; ++k) far.points.push_back(cplx(5.0, 5.0) + std::polar(0.1, 2 * M_PI * k / 40));
  far.points.back() = far.points.front();
  far.closed = true;
  CHECK_THROWS_AS(nodal::enclosed_mass(ones, far), FitError);
}

TEST_CASE("operator residual") {
  const wavefield::WaveFunction wave(zero(1));
  const auto conv = nodal::residual_convergence(wave, {0.3, 0.5, 0.6, 0.8}, 0.004);
  CHECK(conv.coarse.median_rel_residual < 1e-2);
  CHECK(conv.ratio > 3.0);
  CHECK(conv.coarse.interior_fraction > 0.5);
  CHECK(conv.fine.grid_spacing == doctest::Approx(0.002));

  // V^{-1/2} (Im tau)^2 is not an eigenfunction at E_1.
  const Window w{0.3, 0.5, 0.6, 0.8};
  auto control = [](cplx z) {
    const auto u = modular::uniformize(z);
    return cplx(std::pow(u.tau.y(), 2.0) / u.scale, 0.0);
  };
  const auto field = wavefield::evaluate_function_grid(control, w, 51, 51, 1);
  CHECK(nodal::operator_residual(zero(1), field).median_rel_residual > 1e-2);

  const auto coarse = wavefield::evaluate_function_grid(control, {0.05, 2.05, 0.05, 2.05}, 21, 21, 1);
  CHECK_THROWS_AS(nodal::operator_residual(zero(1), coarse), CoarseGridError);
  const auto skew = wavefield::evaluate_function_grid(control, {0.3, 0.5, 0.6, 0.9}, 51, 51, 1);
  CHECK_THROWS_AS(nodal::operator_residual(zero(1), skew), DomainError);
}

TEST_CASE("nodal lines of the first two wave functions") {
  for (int n : {1, 2}) {
    const wavefield::WaveFunction wave(zero(n));
    const Window w = n == 1 ? Window{-1.0, 2.0, -1.5, 1.5} : Window{-1.5, 2.5, -2.0, 2.0};
    const auto psi = wavefield::evaluate_grid(wave, w, 151, 151);
    nodal::NodalOptions opt;
    opt.refine = [&](cplx z) { return wave.reduced(z).real(); };
    const auto lines = nodal::extract_nodal_lines(psi, opt);
    const auto report = nodal::classify_nodal_scenario(lines);
    CAPTURE(n);
    CHECK(report.scenario == (n == 1 ? nodal::Scenario::first : nodal::Scenario::second));
    for (const auto& l : lines) {
      CHECK(l.self_intersections == 0);
      for (int e : {0, 1}) {
        if (l.endpoints_on[e] == EndpointLabel::open && !l.closed) {
          CHECK(on_boundary(e == 0 ? l.points.front() : l.points.back(), w, 1e-9));
        }
      }
    }
    const auto loops = nodal::assemble_closed_loops(lines);
    REQUIRE_FALSE(loops.empty());
    for (const auto& loop : loops) CHECK(nodal::flux_integral(wave, psi, loop).im_e_bound < 1e-3);
  }
}
