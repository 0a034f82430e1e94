#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ifpp/density.hpp"
#include "ifpp/diagnostics.hpp"
#include "ifpp/iterated_map.hpp"
#include "ifpp/rosenblatt.hpp"
#include "ifpp/uniform_map.hpp"

namespace ifpp {

/// Parses a density spec:
///   triangular | ramp | arcsine | uniform | uniform2d
///   checkerboard[:n,low,high]        (default 4,0.25,1.75)
///   grid1d:v1,v2,...
///   grid2d:rows,cols,v1,v2,...       (row 0 = smallest x2)
///   <path>.pgm                       (greyscale image)
DensityModel parse_density_spec(std::string_view spec);

std::string_view to_string(JitterPolicy policy) noexcept;
JitterPolicy jitter_policy_from_string(std::string_view text);

nlohmann::json transform_to_json(const RosenblattTransform& transform);
/// Rebuilds the transform and checks that the recomputed cumulative tables
/// match the stored ones bit for bit.
RosenblattTransform transform_from_json(const nlohmann::json& doc);

void save_transform(const std::filesystem::path& path, const RosenblattTransform& transform);
RosenblattTransform load_transform(const std::filesystem::path& path);

/// An iterated map together with the text it was built from.
struct MapBundle {
  RosenblattTransform source;
  std::optional<RosenblattTransform> target;  // transport maps only
  std::string uniform_spec;
  JitterPolicy jitter = JitterPolicy::Auto;

  UniformMap uniform() const { return parse_uniform_map(uniform_spec, jitter); }
  IteratedMap map() const;
};

/// Writes `path` plus `<stem>.transform.json` (and `<stem>.target.json` for
/// transport maps) next to it. The bundle refers to them by file name.
void save_map_bundle(const std::filesystem::path& path, const MapBundle& bundle);
MapBundle load_map_bundle(const std::filesystem::path& path);

/// `step,x1[,x2,...]` with 17 significant digits.
void write_orbit_csv(std::ostream& out, const Orbit& orbit);
void write_points_csv(std::ostream& out, const std::vector<Point>& points);

/// Reads points from CSV. A header line is optional; when its first field is
/// `step` the first column is dropped. Errors carry `name:line`.
std::vector<Point> read_points_csv(std::istream& in, const std::string& name = "<input>");
std::vector<Point> read_points_csv_file(const std::filesystem::path& path);

/// One line per bin with bin bounds, count and normalized density.
void write_histogram_csv(std::ostream& out, const HistogramGrid& hist);
/// 16-bit PGM of a 2D histogram scaled so the fullest bin is 65535; the top
/// image row is the largest x2.
void write_histogram_pgm(std::ostream& out, const HistogramGrid& hist);

}  // namespace ifpp
