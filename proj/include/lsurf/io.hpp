#pragma once

#include <array>
#include <string>

#include <json.hpp>

#include "lsurf/bonnet.hpp"
#include "lsurf/geoframe.hpp"
#include "lsurf/pnmcv.hpp"

namespace lsurf::io {

using nlohmann::json;

/// Writes text to `path` atomically (temp file + rename).
void write_file_atomic(const std::string& path, const std::string& text);

json load_json(const std::string& path);
/// Serializes with the artifact envelope (schema/version/config) and writes
/// atomically. `config` may be null.
void save_json(const std::string& path, json payload, const json& config = nullptr);

json to_json(const GridD& g);
GridD grid_from_json(const json& j);

json to_json(const GFGrid& g);
GFGrid gfgrid_from_json(const json& j);

json to_json(const CanonicalTriple& t);
CanonicalTriple canonical_triple_from_json(const json& j);

json to_json(const PnmcvGrid& g);
PnmcvGrid pnmcv_grid_from_json(const json& j);

json to_json(const ReconstructedSurface& s, bool include_frames = true);
/// Position grid + metadata of a stored surface artifact.
struct SurfaceGridData {
    Domain domain;
    double hu = 0, hv = 0;
    int eps = 1;
    Grid2d<Vec4> z;
};
SurfaceGridData surface_grid_from_json(const json& j);

json to_json(const SeparabilityReport& rep);

/// Formats a double with 17 significant digits (round-trip exact).
std::string format_g17(double x);

/// OBJ export of a position grid: projection onto three coordinate axes
/// (0-based indices into x1..x4), quad-split triangulation.
std::string to_obj(const Grid2d<Vec4>& z, const std::array<int, 3>& axes = {0, 1, 2});

}  // namespace lsurf::io
