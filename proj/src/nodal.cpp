#include "rzspec/nodal.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "rzspec/error.hpp"
#include "rzspec/parallel.hpp"

namespace rzspec::nodal {

using special::kPi;

namespace {

int resolve_workers(int workers) { return workers > 0 ? workers : worker_count(); }

double median(std::vector<double> v) {
  if (v.empty()) throw FitError("no interior samples left after masking");
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + mid, v.end());
  if (v.size() % 2 == 1) return v[mid];
  const double upper = v[mid];
  const double lower = *std::max_element(v.begin(), v.begin() + mid);
  return 0.5 * (lower + upper);
}

// Proper crossing of segments ab and cd (shared endpoints do not count).
bool segments_cross(cplx a, cplx b, cplx c, cplx d) {
  auto orient = [](cplx p, cplx q, cplx r) {
    const double v = (q.real() - p.real()) * (r.imag() - p.imag()) - (q.imag() - p.imag()) * (r.real() - p.real());
    return (v > 0.0) - (v < 0.0);
  };
  const int o1 = orient(a, b, c);
  const int o2 = orient(a, b, d);
  const int o3 = orient(c, d, a);
  const int o4 = orient(c, d, b);
  return o1 * o2 < 0 && o3 * o4 < 0;
}

int count_self_intersections(const std::vector<cplx>& p) {
  int count = 0;
  const std::size_t n = p.size();
  if (n < 4) return 0;
  const bool closed = p.front() == p.back();
  for (std::size_t i = 0; i + 1 < n; ++i) {
    // Cheap rejection by bounding boxes keeps this quadratic loop fast.
    const double xlo = std::min(p[i].real(), p[i + 1].real());
    const double xhi = std::max(p[i].real(), p[i + 1].real());
    const double ylo = std::min(p[i].imag(), p[i + 1].imag());
    const double yhi = std::max(p[i].imag(), p[i + 1].imag());
    for (std::size_t j = i + 2; j + 1 < n; ++j) {
      if (closed && i == 0 && j + 2 == n) continue;
      if (std::max(p[j].real(), p[j + 1].real()) < xlo || std::min(p[j].real(), p[j + 1].real()) > xhi ||
          std::max(p[j].imag(), p[j + 1].imag()) < ylo || std::min(p[j].imag(), p[j + 1].imag()) > yhi) {
        continue;
      }
      if (segments_cross(p[i], p[i + 1], p[j], p[j + 1])) ++count;
    }
  }
  return count;
}

EndpointLabel label_of(cplx p) {
  if (p == cplx(0.0)) return EndpointLabel::z0;
  if (p == cplx(1.0)) return EndpointLabel::z1;
  return EndpointLabel::open;
}

// A crossing of the zero level on one grid edge.
struct Crossing {
  int i0, j0, i1, j1;  // the edge's end nodes
  double t;            // position from node 0
  cplx point;
  double imag;
};

}  // namespace

std::string to_string(EndpointLabel label) {
  switch (label) {
    case EndpointLabel::z0:
      return "z0";
    case EndpointLabel::z1:
      return "z1";
    case EndpointLabel::open:
      break;
  }
  return "open";
}

// ---------------------------------------------------------------------------

ResidualReport operator_residual(const GridField& psi, cplx energy, const ResidualOptions& options) {
  const double h = psi.dx();
  if (std::abs(psi.dx() - psi.dy()) > 1e-9 * h) throw DomainError("operator residual needs dx == dy");
  if (h * h * std::abs(energy) > 0.5) {
    throw CoarseGridError("grid spacing " + std::to_string(h) + " is too coarse for |E| = " +
                          std::to_string(std::abs(energy)));
  }
  const int nx = psi.nx();
  const int ny = psi.ny();
  std::vector<double> root_v(static_cast<std::size_t>(nx) * ny);
  std::vector<cplx> g(root_v.size());
  parallel_for(ny, resolve_workers(options.workers), [&](int j) {
    for (int i = 0; i < nx; ++i) {
      const std::size_t k = static_cast<std::size_t>(j) * nx + i;
      root_v[k] = std::sqrt(modular::potential_v(psi.z(i, j)).v);
      g[k] = root_v[k] * psi.at(i, j);
    }
  });

  const double exclusion = options.mask_cells * h;
  std::vector<double> residuals;
  for (int j = 1; j + 1 < ny; ++j) {
    for (int i = 1; i + 1 < nx; ++i) {
      const cplx z = psi.z(i, j);
      if (std::abs(z) <= exclusion || std::abs(z - 1.0) <= exclusion) continue;
      const std::size_t k = static_cast<std::size_t>(j) * nx + i;
      const cplx lap = (g[k + 1] + g[k - 1] + g[k + nx] + g[k - nx] - 4.0 * g[k]) / (h * h);
      const cplx e_psi = energy * psi.at(i, j);
      residuals.push_back(std::abs(-root_v[k] * lap - e_psi) / (std::abs(e_psi) + 1e-300));
    }
  }
  const double fraction = double(residuals.size()) / (double(nx) * ny);
  return {psi.zero_index(), median(std::move(residuals)), h, fraction};
}

ResidualReport operator_residual(const lfunctions::ZetaZero& zero, const GridField& psi,
                                 const ResidualOptions& options) {
  return operator_residual(psi, zero.energy(), options);
}

ResidualConvergence residual_convergence(const WaveFunction& wave, const Window& window, double h,
                                         const ResidualOptions& options) {
  window.validate();
  auto report = [&](double step) {
    const int nx = static_cast<int>(std::lround((window.xmax - window.xmin) / step)) + 1;
    const int ny = static_cast<int>(std::lround((window.ymax - window.ymin) / step)) + 1;
    const Window w{window.xmin, window.xmin + (nx - 1) * step, window.ymin, window.ymin + (ny - 1) * step};
    const GridField field = wavefield::evaluate_grid(wave, w, nx, ny, {options.workers, 4'000'000});
    return operator_residual(field, wave.energy(), options);
  };
  ResidualConvergence out{report(h), report(0.5 * h), 0.0};
  out.ratio = out.coarse.median_rel_residual / out.fine.median_rel_residual;
  return out;
}

// ---------------------------------------------------------------------------

std::vector<NodalLine> extract_nodal_lines(const GridField& field, const NodalOptions& options) {
  const int nx = field.nx();
  const int ny = field.ny();
  double max_abs = 0.0;
  double sum_imag = 0.0;
  double sum_all = 0.0;
  for (const cplx& v : field.values()) {
    max_abs = std::max(max_abs, std::abs(v));
    sum_imag += v.imag() * v.imag();
    sum_all += std::norm(v);
  }
  if (sum_all > 0.0 && std::sqrt(sum_imag / sum_all) > options.max_imag_fraction) {
    throw PhaseResidualError("imaginary part is " + std::to_string(100.0 * std::sqrt(sum_imag / sum_all)) +
                             "% of the field; not a real nodal problem");
  }
  const double tolerance = options.tolerance >= 0.0 ? options.tolerance : 1e-6 * max_abs;
  auto positive = [&](int i, int j) { return field.at(i, j).real() > 0.0; };

  // Edge ids: horizontal (i,j)-(i+1,j) first, then vertical (i,j)-(i,j+1).
  const int n_horizontal = (nx - 1) * ny;
  auto h_edge = [&](int i, int j) { return j * (nx - 1) + i; };
  auto v_edge = [&](int i, int j) { return n_horizontal + j * nx + i; };
  std::map<int, int> crossing_of_edge;
  std::vector<Crossing> crossings;
  auto add_crossing = [&](int id, int i0, int j0, int i1, int j1) {
    if (crossing_of_edge.count(id) != 0) return;
    const cplx v0 = field.at(i0, j0);
    const cplx v1 = field.at(i1, j1);
    const double t = v0.real() / (v0.real() - v1.real());
    const cplx p = field.z(i0, j0) + t * (field.z(i1, j1) - field.z(i0, j0));
    crossing_of_edge[id] = static_cast<int>(crossings.size());
    crossings.push_back({i0, j0, i1, j1, t, p, v0.imag() + t * (v1.imag() - v0.imag())});
  };

  // Segments between crossing indices.
  std::vector<std::array<int, 2>> segments;
  for (int j = 0; j + 1 < ny; ++j) {
    for (int i = 0; i + 1 < nx; ++i) {
      const bool a = positive(i, j);
      const bool b = positive(i + 1, j);
      const bool c = positive(i + 1, j + 1);
      const bool d = positive(i, j + 1);
      // bottom, right, top, left
      const std::array<bool, 4> cut = {a != b, b != c, c != d, d != a};
      const std::array<int, 4> ids = {h_edge(i, j), v_edge(i + 1, j), h_edge(i, j + 1), v_edge(i, j)};
      const std::array<std::array<int, 4>, 4> ends = {{{i, j, i + 1, j},
                                                       {i + 1, j, i + 1, j + 1},
                                                       {i, j + 1, i + 1, j + 1},
                                                       {i, j, i, j + 1}}};
      std::vector<int> hit;
      for (int e = 0; e < 4; ++e) {
        if (!cut[e]) continue;
        add_crossing(ids[e], ends[e][0], ends[e][1], ends[e][2], ends[e][3]);
        hit.push_back(e);
      }
      auto link = [&](int e0, int e1) { segments.push_back({crossing_of_edge[ids[e0]], crossing_of_edge[ids[e1]]}); };
      if (hit.size() == 2) {
        link(hit[0], hit[1]);
      } else if (hit.size() == 4) {
        const double center = 0.25 * (field.at(i, j).real() + field.at(i + 1, j).real() +
                                      field.at(i + 1, j + 1).real() + field.at(i, j + 1).real());
        if ((center > 0.0) == a) {
          link(0, 1);  // around b
          link(2, 3);  // around d
        } else {
          link(0, 3);  // around a
          link(1, 2);  // around c
        }
      }
    }
  }

  if (options.refine) {
    parallel_for(static_cast<int>(crossings.size()), resolve_workers(options.workers), [&](int k) {
      Crossing& c = crossings[k];
      cplx lo = field.z(c.i0, c.j0);
      cplx hi = field.z(c.i1, c.j1);
      double f_lo = field.at(c.i0, c.j0).real();
      double f_hi = field.at(c.i1, c.j1).real();
      if (f_lo == 0.0 || f_hi == 0.0) return;
      // Illinois variant of regula falsi on the edge.
      int side = 0;
      cplx p = c.point;
      for (int it = 0; it < 60; ++it) {
        p = lo + (f_lo / (f_lo - f_hi)) * (hi - lo);
        const double f = options.refine(p);
        if (f == 0.0 || std::abs(hi - lo) < 1e-13 * (1.0 + std::abs(p))) break;
        if ((f > 0.0) == (f_hi > 0.0)) {
          hi = p;
          f_hi = f;
          if (side == -1) f_lo *= 0.5;
          side = -1;
        } else {
          lo = p;
          f_lo = f;
          if (side == 1) f_hi *= 0.5;
          side = 1;
        }
      }
      c.point = p;
    });
  }

  // Chain segments. Every crossing has at most two incident segments.
  const int n = static_cast<int>(crossings.size());
  std::vector<std::vector<int>> incident(n);
  for (int s = 0; s < static_cast<int>(segments.size()); ++s) {
    incident[segments[s][0]].push_back(s);
    incident[segments[s][1]].push_back(s);
  }
  std::vector<char> used(segments.size(), 0);
  std::vector<std::vector<int>> chains;
  auto walk = [&](int start) {
    std::vector<int> chain{start};
    int cur = start;
    for (;;) {
      int next_seg = -1;
      for (int s : incident[cur]) {
        if (!used[s]) {
          next_seg = s;
          break;
        }
      }
      if (next_seg < 0) break;
      used[next_seg] = 1;
      cur = segments[next_seg][0] == cur ? segments[next_seg][1] : segments[next_seg][0];
      chain.push_back(cur);
    }
    return chain;
  };
  for (int c = 0; c < n; ++c) {
    if (incident[c].size() == 1 && !used[incident[c][0]]) chains.push_back(walk(c));
  }
  for (int c = 0; c < n; ++c) {
    for (int s : incident[c]) {
      if (!used[s]) chains.push_back(walk(c));
    }
  }

  const double h = std::max(field.dx(), field.dy());
  const double snap = options.snap_cells * h;
  auto well_of = [&](cplx p) -> int {
    if (std::abs(p) <= snap) return 0;
    if (std::abs(p - 1.0) <= snap) return 1;
    return -1;
  };

  std::vector<NodalLine> lines;
  auto emit = [&](std::vector<cplx> pts, double max_imag) {
    // Drop repeated vertices (several edges can share a zero-valued node).
    pts.erase(std::unique(pts.begin(), pts.end(), [](cplx a, cplx b) { return std::abs(a - b) < 1e-14; }),
              pts.end());
    if (pts.size() < 2) return;
    if (std::abs(pts.front() - pts.back()) < 1e-14) pts.back() = pts.front();
    // Bridge long steps next to a snapped end.
    std::vector<cplx> out{pts.front()};
    for (std::size_t k = 1; k < pts.size(); ++k) {
      const double gap = std::abs(pts[k] - out.back());
      const int pieces = static_cast<int>(std::ceil(gap / (2.0 * h)));
      for (int m = 1; m < pieces; ++m) out.push_back(out.back() + (pts[k] - out.back()) / double(pieces - m + 1));
      out.push_back(pts[k]);
    }
    NodalLine line;
    line.points = std::move(out);
    line.closed = line.points.front() == line.points.back();
    line.endpoints_on = {label_of(line.points.front()), label_of(line.points.back())};
    line.self_intersections = count_self_intersections(line.points);
    line.max_abs_imag = max_imag;
    if (options.refine) {
      for (const cplx& p : line.points) line.max_abs_field = std::max(line.max_abs_field, std::abs(options.refine(p)));
    }
    lines.push_back(std::move(line));
  };

  for (const auto& chain : chains) {
    std::vector<int> seq = chain;
    const bool cyclic = seq.size() > 2 && seq.front() == seq.back();
    if (cyclic) seq.pop_back();
    std::vector<int> wells(seq.size());
    for (std::size_t k = 0; k < seq.size(); ++k) wells[k] = well_of(crossings[seq[k]].point);
    const bool touches = std::any_of(wells.begin(), wells.end(), [](int w) { return w >= 0; });
    if (cyclic) {
      if (touches) {
        if (std::all_of(wells.begin(), wells.end(), [](int w) { return w >= 0; })) continue;
        // Rotate so the sequence starts at the beginning of a run near a well.
        std::size_t start = 0;
        for (std::size_t k = 0; k < seq.size(); ++k) {
          const std::size_t prev = (k + seq.size() - 1) % seq.size();
          if (wells[k] >= 0 && wells[prev] != wells[k]) {
            start = k;
            break;
          }
        }
        std::rotate(seq.begin(), seq.begin() + start, seq.end());
        std::rotate(wells.begin(), wells.begin() + start, wells.end());
      }
      seq.push_back(seq.front());
      wells.push_back(wells.front());
    }

    std::vector<cplx> piece;
    double piece_imag = 0.0;
    int current_well = -1;
    for (std::size_t k = 0; k < seq.size(); ++k) {
      const Crossing& c = crossings[seq[k]];
      const int w = wells[k];
      if (w >= 0) {
        if (w != current_well) {
          const cplx anchor = w == 0 ? cplx(0.0) : cplx(1.0);
          piece.push_back(anchor);
          emit(piece, piece_imag);
          piece = {anchor};
          piece_imag = 0.0;
        }
      } else {
        piece.push_back(c.point);
        piece_imag = std::max(piece_imag, std::abs(c.imag));
      }
      current_well = w;
    }
    emit(piece, piece_imag);
  }

  for (const NodalLine& line : lines) {
    if (line.max_abs_imag > 10.0 * tolerance && tolerance > 0.0) {
      throw PhaseResidualError("imaginary part along a nodal line exceeds 10x the nodal tolerance");
    }
  }
  return lines;
}

double signed_area(const std::vector<cplx>& polygon) {
  double a = 0.0;
  for (std::size_t k = 0; k + 1 < polygon.size(); ++k) {
    a += polygon[k].real() * polygon[k + 1].imag() - polygon[k + 1].real() * polygon[k].imag();
  }
  if (!polygon.empty() && polygon.front() != polygon.back()) {
    a += polygon.back().real() * polygon.front().imag() - polygon.front().real() * polygon.back().imag();
  }
  return 0.5 * a;
}

std::vector<NodalLine> assemble_closed_loops(const std::vector<NodalLine>& lines) {
  std::vector<NodalLine> loops;
  std::vector<std::size_t> arcs;
  for (std::size_t k = 0; k < lines.size(); ++k) {
    const NodalLine& l = lines[k];
    if (l.closed) {
      loops.push_back(l);
    } else {
      const auto a = l.endpoints_on[0];
      const auto b = l.endpoints_on[1];
      if (a != EndpointLabel::open && b != EndpointLabel::open && a != b) arcs.push_back(k);
    }
  }
  // Join arcs pairwise: the first oriented z0 -> z1, the second traversed back.
  auto oriented = [&](std::size_t k) {
    std::vector<cplx> p = lines[k].points;
    if (lines[k].endpoints_on[0] != EndpointLabel::z0) std::reverse(p.begin(), p.end());
    return p;
  };
  struct Candidate {
    double area;
    std::size_t a, b;
    std::vector<cplx> polygon;
  };
  std::vector<Candidate> candidates;
  for (std::size_t x = 0; x < arcs.size(); ++x) {
    for (std::size_t y = x + 1; y < arcs.size(); ++y) {
      std::vector<cplx> poly = oriented(arcs[x]);
      std::vector<cplx> back = oriented(arcs[y]);
      poly.insert(poly.end(), back.rbegin() + 1, back.rend());
      candidates.push_back({std::abs(signed_area(poly)), x, y, std::move(poly)});
    }
  }
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Candidate& l, const Candidate& r) { return l.area < r.area; });
  std::vector<char> taken(arcs.size(), 0);
  for (auto& c : candidates) {
    if (taken[c.a] || taken[c.b]) continue;
    taken[c.a] = taken[c.b] = 1;
    NodalLine loop;
    loop.points = std::move(c.polygon);
    loop.closed = true;
    loop.endpoints_on = {EndpointLabel::z0, EndpointLabel::z0};
    loop.self_intersections = count_self_intersections(loop.points);
    loop.max_abs_field = std::max(lines[arcs[c.a]].max_abs_field, lines[arcs[c.b]].max_abs_field);
    loop.max_abs_imag = std::max(lines[arcs[c.a]].max_abs_imag, lines[arcs[c.b]].max_abs_imag);
    loops.push_back(std::move(loop));
  }
  return loops;
}

std::string ScenarioReport::label() const {
  switch (scenario) {
    case Scenario::first:
      return "scenario 1";
    case Scenario::second:
      return "scenario 2";
    case Scenario::other:
      break;
  }
  return "other";
}

ScenarioReport classify_nodal_scenario(const std::vector<NodalLine>& lines) {
  ScenarioReport r{Scenario::other, 0, 0, 0, 0, 0};
  for (const NodalLine& l : lines) {
    const auto a = l.endpoints_on[0];
    const auto b = l.endpoints_on[1];
    if (a == EndpointLabel::open || b == EndpointLabel::open) {
      if (l.closed) {
        ++r.closed_free;
      } else {
        ++r.open_lines;
      }
    } else if (a != b) {
      ++r.arcs_z0_z1;
    } else if (a == EndpointLabel::z0) {
      ++r.loops_z0;
    } else {
      ++r.loops_z1;
    }
  }
  if (r.arcs_z0_z1 >= 2) {
    r.scenario = Scenario::first;
  } else if (r.loops_z0 >= 1 && r.loops_z1 >= 1) {
    r.scenario = Scenario::second;
  }
  return r;
}

// ---------------------------------------------------------------------------

CrossReport detect_cross(const std::function<double(cplx)>& f_of_eta, double radius) {
  constexpr int kSamples = 720;
  auto f_at = [&](double theta) { return f_of_eta(std::polar(radius, theta)); };
  CrossReport report{radius, {}, false};
  double prev = f_at(0.0);
  for (int k = 1; k <= kSamples; ++k) {
    const double theta = 2.0 * kPi * k / kSamples;
    const double cur = f_at(theta);
    if ((prev > 0.0) != (cur > 0.0)) {
      double lo = 2.0 * kPi * (k - 1) / kSamples;
      double hi = theta;
      double f_lo = prev;
      for (int it = 0; it < 50; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double f_mid = f_at(mid);
        if ((f_mid > 0.0) == (f_lo > 0.0)) {
          lo = mid;
          f_lo = f_mid;
        } else {
          hi = mid;
        }
      }
      report.angles_deg.push_back(std::fmod(0.5 * (lo + hi) * 180.0 / kPi, 360.0));
    }
    prev = cur;
  }
  if (report.angles_deg.size() == 4) {
    report.is_cross = true;
    for (int k = 0; k < 4; ++k) {
      if (std::abs(report.angles_deg[k] - (45.0 + 90.0 * k)) > 10.0) report.is_cross = false;
    }
  }
  return report;
}

CrossReport detect_cross_at_i(const WaveFunction& wave, double radius) {
  if (!(radius >= 1e-3 && radius <= 5e-2)) throw DomainError("cross radius must lie in [1e-3, 5e-2]");
  const cplx i(0.0, 1.0);
  return detect_cross([&](cplx eta) { return wave.phi(modular::UpperHalfPoint(i + eta)).real(); }, radius);
}

// ---------------------------------------------------------------------------

double boundary_flux(const std::function<cplx(cplx)>& g, const NodalLine& loop, double h) {
  if (!loop.closed || loop.points.size() < 4) throw OpenLoopError("flux needs a closed loop");
  const double orientation = signed_area(loop.points) >= 0.0 ? 1.0 : -1.0;
  const cplx i(0.0, 1.0);
  double flux = 0.0;
  for (std::size_t k = 0; k + 1 < loop.points.size(); ++k) {
    const cplx a = loop.points[k];
    const cplx b = loop.points[k + 1];
    const cplx m = 0.5 * (a + b);
    const cplx gm = g(m);
    const cplx gx = (g(m + h) - g(m - h)) / (2.0 * h);
    const cplx gy = (g(m + i * h) - g(m - i * h)) / (2.0 * h);
    const double jx = 2.0 * (std::conj(gm) * gx).imag();
    const double jy = 2.0 * (std::conj(gm) * gy).imag();
    const cplx d = b - a;
    // Outward normal times length for a counter-clockwise loop: (dy, -dx).
    flux += orientation * (jx * d.imag() - jy * d.real());
  }
  return flux;
}

double enclosed_mass(const GridField& psi, const NodalLine& loop) {
  const auto& p = loop.points;
  double mass = 0.0;
  int inside_count = 0;
  for (int j = 0; j < psi.ny(); ++j) {
    const double y = psi.y(j);
    // Crossings of the horizontal line through this row.
    std::vector<double> xs;
    for (std::size_t k = 0; k + 1 < p.size(); ++k) {
      const cplx a = p[k];
      const cplx b = p[k + 1];
      if ((a.imag() > y) != (b.imag() > y)) {
        xs.push_back(a.real() + (y - a.imag()) / (b.imag() - a.imag()) * (b.real() - a.real()));
      }
    }
    std::sort(xs.begin(), xs.end());
    for (int i = 0; i < psi.nx(); ++i) {
      const double x = psi.x(i);
      const auto crossings_left = std::lower_bound(xs.begin(), xs.end(), x) - xs.begin();
      if (crossings_left % 2 == 1) {
        mass += std::norm(psi.at(i, j));
        ++inside_count;
      }
    }
  }
  if (inside_count == 0) throw FitError("no grid node lies inside the loop");
  return mass * psi.dx() * psi.dy();
}

FluxReport flux_integral(const std::function<cplx(cplx)>& g, const GridField& psi, const NodalLine& loop) {
  const double flux = boundary_flux(g, loop, std::min(psi.dx(), psi.dy()));
  const double mass = enclosed_mass(psi, loop);
  if (!(mass > 0.0)) throw FitError("enclosed mass vanishes");
  return {loop, flux, mass, std::abs(flux) / (2.0 * mass)};
}

FluxReport flux_integral(const WaveFunction& wave, const GridField& psi, const NodalLine& loop) {
  return flux_integral([&](cplx z) { return wave.reduced(z); }, psi, loop);
}

}  // namespace rzspec::nodal
