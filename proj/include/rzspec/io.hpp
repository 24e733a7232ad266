#pragma once

// File formats: grid CSV, nodal JSON, PPM heatmaps, and atomic writes.

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "rzspec/nodal.hpp"
#include "rzspec/wavefield.hpp"

namespace rzspec::io {

/// Writes to a temporary file in the target directory, then renames it over
/// the target. Throws std::runtime_error on I/O failure.
void write_atomic(const std::filesystem::path& path, const std::string& content);

/// `# zero_index=.. rho=..+..i window=..` line, then `x,y,re,im,abs2` and one
/// row per sample, y outer, x inner, %.17g.
std::string format_grid_csv(const wavefield::GridField& field);

struct NodalDocument {
  int zero_index = 0;
  std::vector<nodal::NodalLine> lines;
  nodal::ScenarioReport scenario{};
  std::vector<nodal::FluxReport> loops;
};

std::string format_nodal_json(const NodalDocument& doc);

enum class PpmMode { log_abs2, linear };

/// Fixed 256-entry gray ramp, black (low) to white (high).
const std::array<std::array<std::uint8_t, 3>, 256>& palette();

/// Binary P6 image with one pixel per sample and row 0 at ymax. Values are
/// log10 |v|^2 or |v|^2, clipped to their 1st..99th percentiles; a zero-width
/// range maps every pixel to the middle of the palette. Zero or NaN samples
/// take the low end, infinite ones the high end.
std::string render_ppm(const wavefield::GridField& field, PpmMode mode);

}  // namespace rzspec::io
