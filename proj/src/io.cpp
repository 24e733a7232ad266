#include "rzspec/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <system_error>

#include <unistd.h>

namespace rzspec::io {

namespace {

void append_number(std::string& out, double v) {
  char buf[32];
  if (!std::isfinite(v)) {
    out += "null";
    return;
  }
  const int n = std::snprintf(buf, sizeof buf, "%.17g", v);
  out.append(buf, static_cast<std::size_t>(n));
}

void append_csv_number(std::string& out, double v) {
  char buf[32];
  const int n = std::snprintf(buf, sizeof buf, "%.17g", v);
  out.append(buf, static_cast<std::size_t>(n));
}

std::string metadata_line(const wavefield::GridField& field) {
  const auto& w = field.window();
  char buf[256];
  std::snprintf(buf, sizeof buf, "# zero_index=%d rho=%.17g%+.17gi window=%.17g,%.17g,%.17g,%.17g\n",
                field.zero_index(), field.rho().real(), field.rho().imag(), w.xmin, w.xmax, w.ymin, w.ymax);
  return buf;
}

void append_points(std::string& out, const std::vector<nodal::cplx>& points) {
  out += '[';
  for (std::size_t k = 0; k < points.size(); ++k) {
    if (k) out += ',';
    out += '[';
    append_number(out, points[k].real());
    out += ',';
    append_number(out, points[k].imag());
    out += ']';
  }
  out += ']';
}

}  // namespace

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  const std::filesystem::path dir = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
  const std::filesystem::path tmp = dir / ("." + path.filename().string() + ".tmp" + std::to_string(::getpid()));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      std::error_code ignored;
      std::filesystem::remove(tmp, ignored);
      throw std::runtime_error("write failed for " + tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::error_code ignored;
    std::filesystem::remove(tmp, ignored);
    throw std::runtime_error("cannot move output into place at " + path.string() + ": " + ec.message());
  }
}

std::string format_grid_csv(const wavefield::GridField& field) {
  std::string out = metadata_line(field);
  out += "x,y,re,im,abs2\n";
  out.reserve(out.size() + static_cast<std::size_t>(field.nx()) * field.ny() * 110);
  for (int j = 0; j < field.ny(); ++j) {
    for (int i = 0; i < field.nx(); ++i) {
      const auto v = field.at(i, j);
      append_csv_number(out, field.x(i));
      out += ',';
      append_csv_number(out, field.y(j));
      out += ',';
      append_csv_number(out, v.real());
      out += ',';
      append_csv_number(out, v.imag());
      out += ',';
      append_csv_number(out, std::norm(v));
      out += '\n';
    }
  }
  return out;
}

std::string format_nodal_json(const NodalDocument& doc) {
  std::string out = "{\n  \"zero_index\": " + std::to_string(doc.zero_index) + ",\n";
  out += "  \"scenario\": \"" + doc.scenario.label() + "\",\n";
  out += "  \"scenario_counts\": {\"arcs_z0_z1\": " + std::to_string(doc.scenario.arcs_z0_z1) +
         ", \"loops_z0\": " + std::to_string(doc.scenario.loops_z0) +
         ", \"loops_z1\": " + std::to_string(doc.scenario.loops_z1) +
         ", \"closed_free\": " + std::to_string(doc.scenario.closed_free) +
         ", \"open_lines\": " + std::to_string(doc.scenario.open_lines) + "},\n";
  out += "  \"lines\": [";
  for (std::size_t k = 0; k < doc.lines.size(); ++k) {
    const auto& l = doc.lines[k];
    out += k ? ",\n    " : "\n    ";
    out += "{\"closed\": ";
    out += l.closed ? "true" : "false";
    out += ", \"endpoints_on\": [\"" + nodal::to_string(l.endpoints_on[0]) + "\", \"" +
           nodal::to_string(l.endpoints_on[1]) + "\"]";
    out += ", \"self_intersections\": " + std::to_string(l.self_intersections);
    out += ", \"points\": ";
    append_points(out, l.points);
    out += '}';
  }
  out += doc.lines.empty() ? "],\n" : "\n  ],\n";
  out += "  \"loops\": [";
  for (std::size_t k = 0; k < doc.loops.size(); ++k) {
    const auto& f = doc.loops[k];
    out += k ? ",\n    " : "\n    ";
    out += "{\"flux\": ";
    append_number(out, f.flux);
    out += ", \"mass\": ";
    append_number(out, f.mass);
    out += ", \"im_e_bound\": ";
    append_number(out, f.im_e_bound);
    out += ", \"points\": ";
    append_points(out, f.loop.points);
    out += '}';
  }
  out += doc.loops.empty() ? "]\n}\n" : "\n  ]\n}\n";
  return out;
}

const std::array<std::array<std::uint8_t, 3>, 256>& palette() {
  static const auto table = [] {
    std::array<std::array<std::uint8_t, 3>, 256> t{};
    for (int k = 0; k < 256; ++k) {
      const auto g = static_cast<std::uint8_t>(k);
      t[k] = {g, g, g};
    }
    return t;
  }();
  return table;
}

std::string render_ppm(const wavefield::GridField& field, PpmMode mode) {
  const int nx = field.nx();
  const int ny = field.ny();
  std::vector<double> value(static_cast<std::size_t>(nx) * ny);
  std::vector<double> finite;
  finite.reserve(value.size());
  for (std::size_t k = 0; k < value.size(); ++k) {
    const double a2 = std::norm(field.values()[k]);
    const double v = mode == PpmMode::log_abs2 ? std::log10(a2) : a2;
    value[k] = v;
    if (std::isfinite(v)) finite.push_back(v);
  }
  double lo = 0.0;
  double hi = 0.0;
  if (!finite.empty()) {
    std::sort(finite.begin(), finite.end());
    const auto rank = [&](double p) {
      return finite[static_cast<std::size_t>(std::floor(p * static_cast<double>(finite.size() - 1)))];
    };
    lo = rank(0.01);
    hi = rank(0.99);
  }

  std::string out = "P6\n" + std::to_string(nx) + " " + std::to_string(ny) + "\n255\n";
  out.reserve(out.size() + value.size() * 3);
  const auto& pal = palette();
  for (int row = 0; row < ny; ++row) {
    const int j = ny - 1 - row;
    for (int i = 0; i < nx; ++i) {
      const double v = value[static_cast<std::size_t>(j) * nx + i];
      int idx;
      if (std::isnan(v) || v == -std::numeric_limits<double>::infinity()) {
        idx = 0;
      } else if (std::isinf(v)) {
        idx = 255;
      } else if (!(hi > lo)) {
        idx = 128;
      } else {
        const double t = std::clamp((v - lo) / (hi - lo), 0.0, 1.0);
        idx = static_cast<int>(std::lround(t * 255.0));
      }
      out.append(reinterpret_cast<const char*>(pal[idx].data()), 3);
    }
  }
  return out;
}

}  // namespace rzspec::io
