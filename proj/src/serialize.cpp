#include "ifpp/serialize.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "ifpp/errors.hpp"
#include "ifpp/pgm.hpp"
#include "ifpp/text.hpp"

namespace ifpp {

using nlohmann::json;

namespace {

constexpr std::string_view kTransformFormat = "ifpp-transform";
constexpr std::string_view kMapFormat = "ifpp-map";

std::vector<double> number_list(std::string_view text, std::string_view spec) {
  std::vector<double> out;
  for (auto field : split(text, ',')) {
    const auto v = parse_double(field);
    if (!v) throw ParseError("density spec '" + std::string(spec) + "': '" + std::string(trim(field)) + "' is not a number");
    out.push_back(*v);
  }
  return out;
}

std::size_t as_count(double v, std::string_view what) {
  if (!(v >= 1.0) || v != std::floor(v) || v > 1e6) throw ParseError(std::string(what) + " must be a positive integer");
  return static_cast<std::size_t>(v);
}

json table_to_json(const MarginalTable& t) {
  return {{"axis", t.axis()}, {"cumulative", std::vector<double>(t.cumulative().begin(), t.cumulative().end())}};
}

bool same_table(const MarginalTable& t, const json& j) {
  const auto cum = j.at("cumulative").get<std::vector<double>>();
  return j.at("axis").get<std::size_t>() == t.axis() && std::equal(cum.begin(), cum.end(), t.cumulative().begin(), t.cumulative().end());
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    // nlohmann reports a byte offset; convert it to a line number.
    std::ifstream again(path);
    std::size_t line = 1;
    std::size_t pos = 0;
    for (char c; pos + 1 < e.byte && again.get(c); ++pos) line += (c == '\n');
    throw ParseError(path.string() + ":" + std::to_string(line) + ": invalid JSON", line);
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out) throw Error("write failed: " + path.string());
}

}  // namespace

DensityModel parse_density_spec(std::string_view spec) {
  const std::string_view s = trim(spec);
  if (s.size() > 4 && s.substr(s.size() - 4) == ".pgm") {
    std::ifstream in{std::string(s), std::ios::binary};
    if (!in) throw ParseError("cannot open image " + std::string(s));
    try {
      return load_image_density(in);
    } catch (const ParseError& e) {
      throw ParseError(std::string(s) + ":" + std::to_string(e.line()) + ": " + e.what(), e.line());
    }
  }
  const auto colon = s.find(':');
  const std::string_view name = s.substr(0, colon);
  const std::string_view args = colon == std::string_view::npos ? std::string_view{} : s.substr(colon + 1);
  const bool has_args = colon != std::string_view::npos;
  const auto no_args = [&] {
    if (has_args) throw ParseError("density '" + std::string(name) + "' takes no parameters");
  };
  try {
    if (name == "triangular") return no_args(), DensityModel::triangular();
    if (name == "ramp") return no_args(), DensityModel::ramp();
    if (name == "arcsine") return no_args(), DensityModel::arcsine();
    if (name == "uniform") return no_args(), DensityModel::uniform();
    if (name == "uniform2d") return no_args(), DensityModel::uniform2d();
    if (name == "checkerboard") {
      if (!has_args) return DensityModel::checkerboard(4, 0.25, 1.75);
      const auto v = number_list(args, s);
      if (v.size() != 3) throw ParseError("checkerboard takes n,low,high");
      return DensityModel::checkerboard(as_count(v[0], "checkerboard size"), v[1], v[2]);
    }
    if (name == "grid1d") {
      if (!has_args) throw ParseError("grid1d needs cell values");
      return DensityModel::grid1d(number_list(args, s));
    }
    if (name == "grid2d") {
      if (!has_args) throw ParseError("grid2d needs rows,cols,values");
      auto v = number_list(args, s);
      if (v.size() < 3) throw ParseError("grid2d needs rows,cols,values");
      const auto rows = as_count(v[0], "grid2d rows");
      const auto cols = as_count(v[1], "grid2d cols");
      return DensityModel::grid2d(rows, cols, std::vector<double>(v.begin() + 2, v.end()));
    }
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError("density spec '" + std::string(s) + "': " + e.what());
  }
  throw ParseError("unknown density '" + std::string(name) + "'");
}

std::string_view to_string(JitterPolicy policy) noexcept {
  switch (policy) {
    case JitterPolicy::On: return "on";
    case JitterPolicy::Off: return "off";
    case JitterPolicy::Auto: break;
  }
  return "auto";
}

JitterPolicy jitter_policy_from_string(std::string_view text) {
  if (text == "auto") return JitterPolicy::Auto;
  if (text == "on") return JitterPolicy::On;
  if (text == "off") return JitterPolicy::Off;
  throw ParseError("jitter must be auto, on or off, got '" + std::string(text) + "'");
}

// ---------------------------------------------------------------------------
// Transforms

json transform_to_json(const RosenblattTransform& transform) {
  const auto& model = transform.model();
  json doc;
  doc["format"] = kTransformFormat;
  doc["version"] = 1;
  doc["kind"] = to_string(model.kind());
  doc["ordering"] = std::vector<std::size_t>(transform.ordering().begin(), transform.ordering().end());
  if (model.is_grid()) {
    doc["rows"] = model.rows();
    doc["cols"] = model.cols();
    doc["values"] = std::vector<double>(model.values().begin(), model.values().end());
    if (model.kind() == DensityKind::Checkerboard2D) {
      const auto& p = model.checkerboard_params();
      doc["checkerboard"] = {{"cells_per_axis", p.cells_per_axis}, {"low", p.low}, {"high", p.high}};
    }
    json tables;
    if (const auto* first = transform.first_table()) tables["first"] = table_to_json(*first);
    json cond = json::array();
    for (const auto& t : transform.conditional_tables()) cond.push_back(table_to_json(t));
    tables["conditional"] = std::move(cond);
    doc["tables"] = std::move(tables);
  }
  return doc;
}

RosenblattTransform transform_from_json(const json& doc) {
  try {
    if (doc.at("format").get<std::string>() != kTransformFormat) throw ParseError("not a transform document");
    const auto kind = density_kind_from_string(doc.at("kind").get<std::string>());
    auto ordering = doc.at("ordering").get<std::vector<std::size_t>>();
    DensityModel model = DensityModel::uniform();
    switch (kind) {
      case DensityKind::Triangular1D: model = DensityModel::triangular(); break;
      case DensityKind::Ramp1D: model = DensityModel::ramp(); break;
      case DensityKind::Arcsine1D: model = DensityModel::arcsine(); break;
      case DensityKind::Uniform1D: model = DensityModel::uniform(); break;
      default: {
        CheckerboardParams params;
        if (doc.contains("checkerboard")) {
          const auto& c = doc.at("checkerboard");
          params = {c.at("cells_per_axis").get<std::size_t>(), c.at("low").get<double>(), c.at("high").get<double>()};
        }
        model = DensityModel::from_stored_grid(kind, doc.at("rows").get<std::size_t>(), doc.at("cols").get<std::size_t>(),
                                               doc.at("values").get<std::vector<double>>(), params);
      }
    }
    auto transform = RosenblattTransform::build(model, std::move(ordering));
    if (model.is_grid()) {
      const auto& tables = doc.at("tables");
      const auto* first = transform.first_table();
      if (first && !same_table(*first, tables.at("first"))) throw ParseError("stored marginal table does not match the density");
      const auto& cond = tables.at("conditional");
      const auto mine = transform.conditional_tables();
      if (cond.size() != mine.size()) throw ParseError("stored conditional tables do not match the density");
      for (std::size_t i = 0; i < mine.size(); ++i) {
        if (!same_table(mine[i], cond[i])) throw ParseError("stored conditional table " + std::to_string(i) + " does not match the density");
      }
    }
    return transform;
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed transform: ") + e.what());
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(std::string("invalid transform: ") + e.what());
  }
}

void save_transform(const std::filesystem::path& path, const RosenblattTransform& transform) {
  write_text_file(path, transform_to_json(transform).dump(2) + "\n");
}

RosenblattTransform load_transform(const std::filesystem::path& path) {
  try {
    return transform_from_json(read_json_file(path));
  } catch (const ParseError& e) {
    const std::string msg = e.what();
    if (msg.rfind(path.string(), 0) == 0) throw;
    throw ParseError(path.string() + ": " + msg, e.line());
  }
}

// ---------------------------------------------------------------------------
// Map bundles

IteratedMap MapBundle::map() const {
  const UniformMap u = uniform();
  return target ? IteratedMap::transport(source, *target, u) : IteratedMap::factorize(source, u);
}

void save_map_bundle(const std::filesystem::path& path, const MapBundle& bundle) {
  const auto stem = path.stem().string();
  const auto dir = path.parent_path();
  const std::string source_name = stem + ".transform.json";
  const std::string target_name = stem + ".target.json";
  const IteratedMap map = bundle.map();  // validates before anything is written

  json doc;
  doc["format"] = kMapFormat;
  doc["version"] = 1;
  doc["transform"] = source_name;
  if (bundle.target) doc["target"] = target_name;
  doc["uniform"] = bundle.uniform_spec;
  doc["jitter"] = to_string(bundle.jitter);
  doc["resolved"] = map.uniform().to_string();

  const std::string source_text = transform_to_json(bundle.source).dump(2) + "\n";
  const std::string target_text = bundle.target ? transform_to_json(*bundle.target).dump(2) + "\n" : std::string{};
  write_text_file(dir / source_name, source_text);
  if (bundle.target) write_text_file(dir / target_name, target_text);
  write_text_file(path, doc.dump(2) + "\n");
}

MapBundle load_map_bundle(const std::filesystem::path& path) {
  const json doc = read_json_file(path);
  try {
    if (doc.at("format").get<std::string>() != kMapFormat) throw ParseError(path.string() + ": not a map bundle");
    const auto dir = path.parent_path();
    MapBundle bundle{load_transform(dir / doc.at("transform").get<std::string>()), std::nullopt,
                     doc.at("uniform").get<std::string>(), jitter_policy_from_string(doc.value("jitter", std::string("auto")))};
    if (doc.contains("target")) bundle.target = load_transform(dir / doc.at("target").get<std::string>());
    bundle.map();
    return bundle;
  } catch (const json::exception& e) {
    throw ParseError(path.string() + ": malformed map bundle: " + e.what());
  } catch (const ParseError& e) {
    const std::string msg = e.what();
    if (msg.find(".json") != std::string::npos) throw;
    throw ParseError(path.string() + ": " + msg, e.line());
  } catch (const Error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------
// CSV

void write_orbit_csv(std::ostream& out, const Orbit& orbit) {
  const std::size_t d = orbit.start.size();
  out << "step";
  for (std::size_t k = 0; k < d; ++k) out << ",x" << (k + 1);
  out << '\n';
  for (std::size_t i = 0; i < orbit.points.size(); ++i) {
    out << orbit.step_of(i);
    for (double v : orbit.points[i]) out << ',' << format_double(v);
    out << '\n';
  }
}

void write_points_csv(std::ostream& out, const std::vector<Point>& points) {
  const std::size_t d = points.empty() ? 1 : points.front().size();
  for (std::size_t k = 0; k < d; ++k) out << (k ? ",x" : "x") << (k + 1);
  out << '\n';
  for (const auto& p : points) {
    for (std::size_t k = 0; k < p.size(); ++k) out << (k ? "," : "") << format_double(p[k]);
    out << '\n';
  }
}

std::vector<Point> read_points_csv(std::istream& in, const std::string& name) {
  std::vector<Point> points;
  std::string line;
  std::size_t lineno = 0;
  std::size_t skip = 0;
  std::size_t width = 0;
  const auto fail = [&](const std::string& what) { throw ParseError(name + ":" + std::to_string(lineno) + ": " + what, lineno); };
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    auto fields = split(line, ',');
    if (points.empty() && width == 0 && !parse_double(fields.front())) {
      skip = trim(fields.front()) == "step" ? 1 : 0;
      width = fields.size();
      continue;
    }
    if (width == 0) width = fields.size();
    if (fields.size() != width) fail("expected " + std::to_string(width) + " fields, found " + std::to_string(fields.size()));
    if (width <= skip || width - skip > kMaxDim) fail("unsupported number of coordinates");
    Point p(width - skip);
    for (std::size_t k = skip; k < width; ++k) {
      const auto v = parse_double(fields[k]);
      if (!v) fail("'" + std::string(trim(fields[k])) + "' is not a number");
      p[k - skip] = *v;
    }
    points.push_back(p);
  }
  if (points.empty()) throw ParseError(name + ": no data rows");
  return points;
}

std::vector<Point> read_points_csv_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  return read_points_csv(in, path.string());
}

void write_histogram_csv(std::ostream& out, const HistogramGrid& hist) {
  const auto bins = hist.bins();
  const auto dens = hist.densities();
  const auto counts = hist.counts();
  const auto edge = [](std::size_t i, std::size_t n) { return format_double(static_cast<double>(i) / static_cast<double>(n)); };
  if (hist.dim() == 1) {
    out << "bin,lo,hi,count,density\n";
    for (std::size_t i = 0; i < bins[0]; ++i)
      out << i << ',' << edge(i, bins[0]) << ',' << edge(i + 1, bins[0]) << ',' << counts[i] << ',' << format_double(dens[i]) << '\n';
    return;
  }
  if (hist.dim() != 2) throw CapabilityError("histogram export supports 1D and 2D");
  out << "i1,i2,x1_lo,x1_hi,x2_lo,x2_hi,count,density\n";
  for (std::size_t j = 0; j < bins[1]; ++j) {
    for (std::size_t i = 0; i < bins[0]; ++i) {
      const std::size_t f = j * bins[0] + i;
      out << i << ',' << j << ',' << edge(i, bins[0]) << ',' << edge(i + 1, bins[0]) << ',' << edge(j, bins[1]) << ','
          << edge(j + 1, bins[1]) << ',' << counts[f] << ',' << format_double(dens[f]) << '\n';
    }
  }
}

void write_histogram_pgm(std::ostream& out, const HistogramGrid& hist) {
  if (hist.dim() != 2) throw CapabilityError("histogram images need a 2D histogram");
  const auto bins = hist.bins();
  const auto counts = hist.counts();
  const auto peak = *std::max_element(counts.begin(), counts.end());
  GrayImage img{bins[0], bins[1], 65535, std::vector<std::uint16_t>(bins[0] * bins[1], 0)};
  for (std::size_t j = 0; j < bins[1]; ++j) {
    for (std::size_t i = 0; i < bins[0]; ++i) {
      const double v = peak ? static_cast<double>(counts[j * bins[0] + i]) / static_cast<double>(peak) : 0.0;
      img.pixels[(bins[1] - 1 - j) * bins[0] + i] = static_cast<std::uint16_t>(std::lround(v * 65535.0));
    }
  }
  write_pgm(out, img, true);
}

}  // namespace ifpp
