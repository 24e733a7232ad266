// rzspec: grids, nodal lines and identity checks from the command line.
//
// Exit status: 0 success, 1 a check exceeded its tolerance, 2 usage or input
// error, 3 numerical failure.

#include <cmath>
#include <complex>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rzspec/eisenstein.hpp"
#include "rzspec/error.hpp"
#include "rzspec/io.hpp"
#include "rzspec/lfunctions.hpp"
#include "rzspec/nodal.hpp"
#include "rzspec/parallel.hpp"
#include "rzspec/wavefield.hpp"

namespace {

using namespace rzspec;
using cplx = std::complex<double>;

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNumeric = 3;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ZeroSelection {
  int index = 1;
  std::string file;
};

struct GridRequest {
  std::string window;
  int nx = 0;
  int ny = 0;
  std::string out;
  std::string ppm;
  std::string ppm_mode = "log-abs2";
};

wavefield::Window parse_window(const std::string& text) {
  std::vector<double> v;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = text.find(',', pos);
    const std::string item = text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    try {
      std::size_t used = 0;
      v.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError("--window: '" + item + "' is not a number");
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  if (v.size() != 4) throw UsageError("--window needs xmin,xmax,ymin,ymax");
  const wavefield::Window w{v[0], v[1], v[2], v[3]};
  try {
    w.validate();
  } catch (const DomainError& e) {
    throw UsageError(std::string("--window: ") + e.what());
  }
  return w;
}

// "2", "1.5+0.7i", "1.5-0.7i", "0.7i", or "re,im".
cplx parse_complex(const std::string& text) {
  auto number = [&](const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != s.size()) throw UsageError("cannot read '" + text + "' as a complex number");
    return v;
  };
  if (const auto comma = text.find(','); comma != std::string::npos) {
    return {number(text.substr(0, comma)), number(text.substr(comma + 1))};
  }
  if (text.empty() || text.back() != 'i') return {number(text), 0.0};
  const std::string body = text.substr(0, text.size() - 1);
  std::size_t split = std::string::npos;
  for (std::size_t k = body.size(); k-- > 1;) {
    if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
      split = k;
      break;
    }
  }
  auto imag_part = [&](const std::string& s) {
    if (s == "+" || s.empty()) return 1.0;
    if (s == "-") return -1.0;
    return number(s);
  };
  if (split == std::string::npos) return {0.0, imag_part(body)};
  return {number(body.substr(0, split)), imag_part(body.substr(split))};
}

lfunctions::ZetaZero select_zero(const ZeroSelection& sel) {
  if (sel.index < 1) throw UsageError("--zero-index must be at least 1");
  if (!sel.file.empty()) {
    std::vector<lfunctions::ZetaZero> zeros;
    try {
      zeros = lfunctions::ingest_zeros(sel.file);
    } catch (const ParseError& e) {
      throw UsageError(sel.file + ": " + e.what());
    } catch (const DomainError& e) {
      throw UsageError(sel.file + ": " + e.what());
    }
    if (static_cast<std::size_t>(sel.index) > zeros.size()) {
      throw UsageError(sel.file + " lists " + std::to_string(zeros.size()) + " zeros; index " +
                       std::to_string(sel.index) + " requested");
    }
    return zeros[sel.index - 1];
  }
  if (sel.index > 100) throw UsageError("--zero-index above 100 needs --zeros-file");
  return lfunctions::find_zeros(sel.index).back();
}

void check_grid(const GridRequest& g) {
  if (g.nx < 2 || g.ny < 2) throw UsageError("--nx and --ny must be at least 2");
  if (static_cast<double>(g.nx) * g.ny > 4e6) throw UsageError("grid exceeds 4000000 samples");
}

void write_grid_outputs(const wavefield::GridField& field, const GridRequest& g) {
  io::write_atomic(g.out, io::format_grid_csv(field));
  if (!g.ppm.empty()) {
    const auto mode = g.ppm_mode == "linear" ? io::PpmMode::linear : io::PpmMode::log_abs2;
    io::write_atomic(g.ppm, io::render_ppm(field, mode));
  }
}

void add_zero_options(CLI::App* cmd, ZeroSelection& sel) {
  cmd->add_option("--zero-index,-n", sel.index, "1-based index of the zeta zero")->capture_default_str();
  cmd->add_option("--zeros-file", sel.file, "read zeros from this file instead of computing them")
      ->check(CLI::ExistingFile);
}

void add_grid_options(CLI::App* cmd, GridRequest& g, const std::string& window, int n, bool csv) {
  g.window = window;
  g.nx = n;
  g.ny = n;
  cmd->add_option("--window", g.window, "xmin,xmax,ymin,ymax")->capture_default_str();
  cmd->add_option("--nx", g.nx, "samples along x")->capture_default_str();
  cmd->add_option("--ny", g.ny, "samples along y")->capture_default_str();
  cmd->add_option("--out,-o", g.out, csv ? "CSV output path" : "JSON output path")->required();
  cmd->add_option("--ppm", g.ppm, "also write a PPM heatmap here");
  cmd->add_option("--ppm-mode", g.ppm_mode, "heatmap scale")
      ->check(CLI::IsMember({"log-abs2", "linear"}))
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Zeta-zero wave functions on the modular potential"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "help for every command");

  // zeros
  int zero_count = 10;
  std::string zeros_out;
  auto* zeros_cmd = app.add_subcommand("zeros", "locate the first zeros of zeta on the critical line");
  zeros_cmd->add_option("--count", zero_count, "number of zeros (1..100)")
      ->check(CLI::Range(1, 100))
      ->capture_default_str();
  zeros_cmd->add_option("--out,-o", zeros_out, "output file (default: standard output)");

  // potential
  GridRequest potential_grid;
  auto* potential_cmd = app.add_subcommand("potential", "sample the potential V on a grid");
  add_grid_options(potential_cmd, potential_grid, "-2,3,-2,2", 500, true);

  // wave
  ZeroSelection wave_zero;
  GridRequest wave_grid;
  auto* wave_cmd = app.add_subcommand("wave", "sample the wave function for one zero on a grid");
  add_zero_options(wave_cmd, wave_zero);
  add_grid_options(wave_cmd, wave_grid, "-1.5,2.5,-2,2", 401, true);

  // nodal
  ZeroSelection nodal_zero;
  GridRequest nodal_grid;
  double nodal_tolerance = -1.0;
  double flux_tol = 1e-3;
  bool no_refine = false;
  auto* nodal_cmd = app.add_subcommand("nodal", "nodal lines, scenario and loop flux for one zero");
  add_zero_options(nodal_cmd, nodal_zero);
  add_grid_options(nodal_cmd, nodal_grid, "-1.5,2.5,-2,2", 401, false);
  nodal_cmd->add_option("--tol", nodal_tolerance, "nodal tolerance (default 1e-6 max|psi|)");
  nodal_cmd->add_option("--flux-tol", flux_tol, "largest accepted |flux| / (2 mass)")->capture_default_str();
  nodal_cmd->add_flag("--no-refine", no_refine, "keep linearly interpolated vertices");

  // verify-identities
  std::string identity_s;
  int identity_zero = 0;
  double identity_tol = -1.0;
  auto* identities_cmd =
      app.add_subcommand("verify-identities", "compare the Epstein zeta with its L-function factorizations");
  auto* s_opt = identities_cmd->add_option("--s", identity_s, "complex s, e.g. 2 or 1.5+0.7i");
  auto* z_opt = identities_cmd->add_option("--zero-index,-n", identity_zero, "use s = rho_n");
  s_opt->excludes(z_opt);
  identities_cmd->add_option("--tol", identity_tol,
                             "relative gap for --s (default 1e-8); largest |side| for --zero-index (default 1e-6)");

  // verify-residual
  ZeroSelection residual_zero;
  std::string residual_window = "0.2,0.8,0.5,1.1";
  double residual_h = 0.004;
  double residual_tol = 1e-2;
  double residual_ratio = 3.0;
  auto* residual_cmd = app.add_subcommand("verify-residual", "finite-difference operator residual at h and h/2");
  add_zero_options(residual_cmd, residual_zero);
  residual_cmd->add_option("--window", residual_window, "xmin,xmax,ymin,ymax")->capture_default_str();
  residual_cmd->add_option("--spacing", residual_h, "grid spacing h")->check(CLI::PositiveNumber)->capture_default_str();
  residual_cmd->add_option("--tol", residual_tol, "largest accepted median residual at h")->capture_default_str();
  residual_cmd->add_option("--min-ratio", residual_ratio, "smallest accepted coarse/fine ratio")
      ->capture_default_str();

  // asymptotics
  ZeroSelection asym_zero;
  double theta = std::numbers::pi / 2;
  double r_min = 1e2;
  double r_max = 1e6;
  int samples = 400;
  double slope_tol = 0.05;
  double omega_tol = 0.02;
  auto* asym_cmd = app.add_subcommand("asymptotics", "fit the large-|z| decay and oscillation along a ray");
  add_zero_options(asym_cmd, asym_zero);
  asym_cmd->add_option("--theta", theta, "ray angle in radians")->capture_default_str();
  asym_cmd->add_option("--r-min", r_min, "inner radius")->capture_default_str();
  asym_cmd->add_option("--r-max", r_max, "outer radius")->capture_default_str();
  asym_cmd->add_option("--samples", samples, "log-spaced samples")->check(CLI::Range(16, 100000))
      ->capture_default_str();
  asym_cmd->add_option("--slope-tol", slope_tol, "accepted |slope + 1 - d_n|")->capture_default_str();
  asym_cmd->add_option("--omega-tol", omega_tol, "accepted relative error of omega")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    try {
      (void)worker_count();
    } catch (const DomainError& e) {
      throw UsageError(std::string("RZSPEC_THREADS: ") + e.what());
    }

    if (*zeros_cmd) {
      const auto zeros = lfunctions::find_zeros(zero_count);
      const std::string text = lfunctions::format_zeros(zeros);
      if (zeros_out.empty()) {
        std::fwrite(text.data(), 1, text.size(), stdout);
      } else {
        io::write_atomic(zeros_out, text);
      }
      return kExitOk;
    }

    if (*potential_cmd) {
      check_grid(potential_grid);
      const auto window = parse_window(potential_grid.window);
      const auto field = wavefield::evaluate_potential_grid(window, potential_grid.nx, potential_grid.ny);
      write_grid_outputs(field, potential_grid);
      return kExitOk;
    }

    if (*wave_cmd) {
      check_grid(wave_grid);
      const auto window = parse_window(wave_grid.window);
      const wavefield::WaveFunction wave(select_zero(wave_zero));
      const auto field = wavefield::evaluate_grid(wave, window, wave_grid.nx, wave_grid.ny);
      write_grid_outputs(field, wave_grid);
      return kExitOk;
    }

    if (*nodal_cmd) {
      check_grid(nodal_grid);
      const auto window = parse_window(nodal_grid.window);
      const wavefield::WaveFunction wave(select_zero(nodal_zero));
      const auto psi = wavefield::evaluate_grid(wave, window, nodal_grid.nx, nodal_grid.ny);
      nodal::NodalOptions options;
      options.tolerance = nodal_tolerance;
      if (!no_refine) options.refine = [&](cplx z) { return wave.reduced(z).real(); };

      io::NodalDocument doc;
      doc.zero_index = wave.zero().index();
      doc.lines = nodal::extract_nodal_lines(psi, options);
      doc.scenario = nodal::classify_nodal_scenario(doc.lines);
      for (const auto& loop : nodal::assemble_closed_loops(doc.lines)) {
        doc.loops.push_back(nodal::flux_integral(wave, psi, loop));
      }
      io::write_atomic(nodal_grid.out, io::format_nodal_json(doc));
      if (!nodal_grid.ppm.empty()) {
        const auto mode = nodal_grid.ppm_mode == "linear" ? io::PpmMode::linear : io::PpmMode::log_abs2;
        io::write_atomic(nodal_grid.ppm, io::render_ppm(psi, mode));
      }

      bool ok = !doc.loops.empty();
      std::printf("zero %d: %s, %zu lines, %zu closed loops\n", doc.zero_index, doc.scenario.label().c_str(),
                doc.lines.size(), doc.loops.size());
      for (const auto& f : doc.loops) {
        const bool pass = f.im_e_bound <= flux_tol;
        ok = ok && pass;
        std::printf("  loop of %zu points: flux %.3e mass %.6g |Im E| bound %.3e %s\n", f.loop.points.size(), f.flux,
                  f.mass, f.im_e_bound, pass ? "ok" : "FAIL");
      }
      if (doc.loops.empty()) std::printf("  no closed nodal loop in the window\n");
      return ok ? kExitOk : kExitCheckFailed;
    }

    if (*identities_cmd) {
      if (identity_s.empty() == (identity_zero == 0)) throw UsageError("give exactly one of --s and --zero-index");
      cplx s;
      const bool at_zero = identity_zero != 0;
      if (at_zero) {
        if (identity_zero < 1 || identity_zero > 100) throw UsageError("--zero-index must lie in 1..100");
        s = lfunctions::find_zeros(identity_zero).back().rho();
      } else {
        s = parse_complex(identity_s);
      }
      const double tol = identity_tol > 0.0 ? identity_tol : (at_zero ? 1e-6 : 1e-8);
      const auto gaps = eisenstein::boundary_factorization_check(s);
      bool ok = true;
      std::printf("s = %.17g%+.17gi\n", s.real(), s.imag());
      std::printf("%-6s %-48s %-48s %s\n", "point", "epstein", "factorized", at_zero ? "max |side|" : "rel gap");
      for (const auto& g : gaps) {
        const double measure = at_zero ? std::max(std::abs(g.lhs), std::abs(g.rhs)) : g.relative_gap;
        const bool pass = measure <= tol;
        ok = ok && pass;
        std::printf("%-6s %+.17e%+.17ei %+.17e%+.17ei %.3e %s\n", g.point.c_str(), g.lhs.real(), g.lhs.imag(),
                  g.rhs.real(), g.rhs.imag(), measure, pass ? "ok" : "FAIL");
      }
      return ok ? kExitOk : kExitCheckFailed;
    }

    if (*residual_cmd) {
      const auto window = parse_window(residual_window);
      const wavefield::WaveFunction wave(select_zero(residual_zero));
      const auto r = nodal::residual_convergence(wave, window, residual_h);
      const bool ok = r.coarse.median_rel_residual <= residual_tol && r.ratio >= residual_ratio;
      std::printf("zero %d: median residual %.3e at h = %g, %.3e at h = %g, ratio %.2f %s\n", wave.zero().index(),
                r.coarse.median_rel_residual, r.coarse.grid_spacing, r.fine.median_rel_residual,
                r.fine.grid_spacing, r.ratio, ok ? "ok" : "FAIL");
      return ok ? kExitOk : kExitCheckFailed;
    }

    if (*asym_cmd) {
      const wavefield::WaveFunction wave(select_zero(asym_zero));
      const auto fit = wavefield::fit_asymptotics(wave, theta, r_min, r_max, samples);
      const double target_slope = -1.0 + fit.d_n_assumed;
      const double omega_err = std::abs(fit.omega_est - wave.zero().gamma()) / wave.zero().gamma();
      const bool ok = std::abs(fit.slope - target_slope) <= slope_tol && omega_err <= omega_tol;
      std::printf("zero %d: slope %.4f (expected %.4f), omega %.4f (gamma %.6f, rel err %.2e), %d sign changes %s\n",
                wave.zero().index(), fit.slope, target_slope, fit.omega_est, wave.zero().gamma(), omega_err,
                fit.sign_changes, ok ? "ok" : "FAIL");
      return ok ? kExitOk : kExitCheckFailed;
    }
  } catch (const UsageError& e) {
    std::cerr << "rzspec: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ResourceError& e) {
    std::cerr << "rzspec: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "rzspec: " << e.what() << '\n';
    return kExitNumeric;
  }
  return kExitUsage;
}
