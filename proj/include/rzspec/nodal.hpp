#pragma once

// Checks on computed wave functions: the finite-difference operator
// residual, nodal lines by marching squares, the nodal cross at tau = i, and
// the probability flux through closed nodal loops.

#include <array>
#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "rzspec/wavefield.hpp"

namespace rzspec::nodal {

using cplx = std::complex<double>;
using wavefield::GridField;
using wavefield::WaveFunction;
using wavefield::Window;

// ---------------------------------------------------------------------------
// Operator residual

struct ResidualReport {
  int zero_index;
  double median_rel_residual;
  double grid_spacing;
  double interior_fraction;  // evaluated samples / all samples
};

struct ResidualOptions {
  double mask_cells = 5.0;  // skip samples within mask_cells * h of z = 0, 1
  int workers = 0;
};

/// Median over interior samples of |-V^{1/2} D(V^{1/2} psi) - E psi| / (|E psi| + 1e-300),
/// D the five-point Laplacian. Needs dx == dy; throws CoarseGridError when
/// h^2 |E| > 0.5.
ResidualReport operator_residual(const GridField& psi, cplx energy, const ResidualOptions& options = {});
ResidualReport operator_residual(const lfunctions::ZetaZero& zero, const GridField& psi,
                                 const ResidualOptions& options = {});

struct ResidualConvergence {
  ResidualReport coarse;  // spacing h
  ResidualReport fine;    // spacing h / 2
  double ratio;           // coarse / fine
};

/// Evaluates psi on the window at spacing h and h/2 and compares residuals.
ResidualConvergence residual_convergence(const WaveFunction& wave, const Window& window, double h,
                                         const ResidualOptions& options = {});

// ---------------------------------------------------------------------------
// Nodal lines

enum class EndpointLabel { z0, z1, open };

std::string to_string(EndpointLabel label);

struct NodalLine {
  std::vector<cplx> points;
  bool closed = false;  // first point == last point
  std::array<EndpointLabel, 2> endpoints_on{EndpointLabel::open, EndpointLabel::open};
  int self_intersections = 0;
  double max_abs_field = 0.0;  // of the refinement function, if one was given
  double max_abs_imag = 0.0;   // interpolated Im field along the line
};

struct NodalOptions {
  double tolerance = -1.0;              // < 0: 1e-6 max |field|
  double max_imag_fraction = 0.01;      // rms(Im) / rms(|field|) above this is rejected
  double snap_cells = 2.0;              // snap to z = 0, 1 within this many spacings
  std::function<double(cplx)> refine;  // real field; moves vertices onto its zero set
  int workers = 0;
};

/// Zero-level contours of Re(field). Lines are split where they pass through
/// z = 0 or z = 1; the split point is exactly 0 or 1 and labels that end.
/// Throws PhaseResidualError if the field is not real to the stated fraction
/// or if Im(field) along a line exceeds 10 tolerance.
std::vector<NodalLine> extract_nodal_lines(const GridField& field, const NodalOptions& options = {});

/// Closed loops: lines that already close, plus pairs of arcs joining z = 0
/// and z = 1 (smallest enclosed area first).
std::vector<NodalLine> assemble_closed_loops(const std::vector<NodalLine>& lines);

enum class Scenario { first, second, other };

struct ScenarioReport {
  Scenario scenario;
  int arcs_z0_z1;
  int loops_z0;
  int loops_z1;
  int closed_free;  // closed lines touching neither well
  int open_lines;   // lines with a free end
  std::string label() const;
};

/// first: at least two arcs from z = 0 end at z = 1. second: separate loops
/// based at z = 0 and at z = 1. other: anything else.
ScenarioReport classify_nodal_scenario(const std::vector<NodalLine>& lines);

/// Signed area by the shoelace formula.
double signed_area(const std::vector<cplx>& polygon);

// ---------------------------------------------------------------------------
// Cross at tau = i

struct CrossReport {
  double radius;
  std::vector<double> angles_deg;  // sign changes of phi(i + r e^{i theta}), in [0, 360)
  bool is_cross;                   // 4 changes, each within 10 degrees of 45 + 90k
};

CrossReport detect_cross(const std::function<double(cplx)>& f_of_eta, double radius);
/// Throws DomainError unless radius is in [1e-3, 5e-2].
CrossReport detect_cross_at_i(const WaveFunction& wave, double radius);

// ---------------------------------------------------------------------------
// Flux

struct FluxReport {
  NodalLine loop;
  double flux;  // outward integral of J = 2 Im(conj(g) grad g), g = V^{1/2} psi
  double mass;  // integral of |psi|^2 over the enclosed grid cells
  double im_e_bound;  // |flux| / (2 mass)
};

/// Outward flux of J through the loop, gradients by central differences of
/// step h at the segment midpoints. Throws OpenLoopError for an open line.
double boundary_flux(const std::function<cplx(cplx)>& g, const NodalLine& loop, double h);

/// Sum of |value|^2 dx dy over grid nodes inside the loop (even-odd rule).
/// Throws FitError if no node is inside.
double enclosed_mass(const GridField& psi, const NodalLine& loop);

FluxReport flux_integral(const std::function<cplx(cplx)>& g, const GridField& psi, const NodalLine& loop);
FluxReport flux_integral(const WaveFunction& wave, const GridField& psi, const NodalLine& loop);

}  // namespace rzspec::nodal
