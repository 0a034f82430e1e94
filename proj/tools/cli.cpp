#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>

#include "ifpp/diagnostics.hpp"
#include "ifpp/errors.hpp"
#include "ifpp/serialize.hpp"
#include "ifpp/text.hpp"

namespace ifpp::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// JSON config files. Top-level objects named after a subcommand hold that
// subcommand's options: {"orbit": {"n": 1000, "x0": "0.3"}}.
class JsonConfig : public CLI::Config {
 public:
  std::string to_config(const CLI::App*, bool, bool, std::string) const override { return "{}\n"; }

  std::vector<CLI::ConfigItem> from_config(std::istream& in) const override {
    json doc;
    try {
      doc = json::parse(in);
    } catch (const json::parse_error& e) {
      throw ParseError(std::string("config file: ") + e.what());
    }
    if (!doc.is_object()) throw ParseError("config file must hold a JSON object");
    std::vector<CLI::ConfigItem> items;
    collect(doc, {}, items);
    return items;
  }

 private:
  static std::string scalar(const json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_number_float()) return format_double(v.get<double>());
    if (v.is_number()) return v.dump();
    throw ParseError("config values must be strings, numbers, booleans or lists of them");
  }

  static void collect(const json& obj, const std::vector<std::string>& parents, std::vector<CLI::ConfigItem>& items) {
    for (const auto& [key, value] : obj.items()) {
      if (value.is_object()) {
        auto nested = parents;
        nested.push_back(key);
        collect(value, nested, items);
        continue;
      }
      CLI::ConfigItem item;
      item.parents = parents;
      item.name = key;
      if (value.is_array()) {
        for (const auto& v : value) item.inputs.push_back(scalar(v));
      } else {
        item.inputs.push_back(scalar(value));
      }
      items.push_back(std::move(item));
    }
  }
};

// ---------------------------------------------------------------------------
// Argument helpers

std::vector<double> number_list(const std::string& text, const std::string& what) {
  std::vector<double> out;
  for (auto field : split(text, ',')) {
    const auto v = parse_double(field);
    if (!v) throw ParseError(what + ": '" + std::string(trim(field)) + "' is not a number");
    out.push_back(*v);
  }
  return out;
}

Point parse_point(const std::string& text, std::size_t dim) {
  const auto v = number_list(text, "--x0");
  if (v.size() == 1 && dim > 1) {
    Point p(dim);
    std::fill(p.begin(), p.end(), v[0]);
    return p;
  }
  if (v.size() != dim) throw ParseError("--x0 needs " + std::to_string(dim) + " coordinate(s)");
  return Point(std::span<const double>(v));
}

std::vector<std::size_t> parse_order(const std::string& text) {
  std::vector<std::size_t> order;
  if (trim(text).empty()) return order;
  for (double v : number_list(text, "--order")) {
    if (v < 1 || v != std::floor(v) || v > kMaxDim) throw ParseError("--order expects 1-based axis numbers");
    order.push_back(static_cast<std::size_t>(v) - 1);
  }
  return order;
}

std::vector<std::size_t> parse_bins(const std::string& text, std::size_t dim) {
  std::vector<std::size_t> bins;
  for (double v : number_list(text, "--bins")) {
    if (v < 1 || v != std::floor(v) || v > 1e7) throw ParseError("--bins expects positive integers");
    bins.push_back(static_cast<std::size_t>(v));
  }
  if (bins.size() == 1 && dim > 1) bins.assign(dim, bins[0]);
  if (bins.size() != dim) throw ParseError("--bins needs " + std::to_string(dim) + " value(s)");
  return bins;
}

std::vector<Point> random_points(std::size_t n, std::size_t dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<Point> pts(n, Point(dim));
  for (auto& p : pts)
    for (double& v : p) v = unif(rng);
  return pts;
}

std::string point_text(const Point& p) {
  std::string s;
  for (std::size_t k = 0; k < p.size(); ++k) s += (k ? "," : "") + format_fixed6(p[k]);
  return s;
}

// All outputs of a command are rendered first and written together, so a
// failure never leaves partial artifacts behind.
struct Outputs {
  std::vector<std::pair<fs::path, std::string>> files;

  void add(fs::path path, std::string content) { files.emplace_back(std::move(path), std::move(content)); }

  void write() const {
    for (const auto& [path, content] : files) {
      if (path.has_parent_path()) fs::create_directories(path.parent_path());
      std::ofstream out(path, std::ios::binary);
      if (!out) throw Error("cannot write " + path.string());
      out << content;
      if (!out) throw Error("write failed: " + path.string());
    }
  }
};

template <class F>
std::string render(F&& f) {
  std::ostringstream os;
  f(os);
  return std::move(os).str();
}

// ---------------------------------------------------------------------------
// Subcommands

struct BuildMapOpts {
  std::string density, uniform, order, jitter = "auto", out;
};

int build_map(const BuildMapOpts& o, std::ostream& out) {
  const auto model = parse_density_spec(o.density);
  MapBundle bundle{RosenblattTransform::build(model, parse_order(o.order)), std::nullopt, o.uniform,
                   jitter_policy_from_string(o.jitter)};
  const auto map = bundle.map();
  save_map_bundle(o.out, bundle);
  out << "map " << map.uniform().to_string() << " density=" << to_string(model.kind()) << " dim=" << map.dim() << '\n';
  return kExitOk;
}

struct OrbitOpts {
  std::string map, x0, out;
  std::size_t n = 1000000, burnin = 0, thin = 1;
  bool via_uniform = false;
};

int run_orbit(const OrbitOpts& o, std::ostream& out) {
  const auto map = load_map_bundle(o.map).map();
  const Point x0 = o.x0.empty() ? default_start(map.dim()) : parse_point(o.x0, map.dim());
  if (o.n == 0) throw ParameterError("--n must be at least 1");
  const OrbitOptions opts{o.burnin, o.thin, true};
  const Orbit orb = o.via_uniform ? orbit_via_uniform(map, x0, o.n, opts) : orbit(map, x0, o.n, opts);
  Outputs files;
  files.add(o.out, render([&](std::ostream& os) { write_orbit_csv(os, orb); }));
  files.write();
  out << "orbit n=" << o.n << " stored=" << orb.points.size() << " last=" << point_text(orb.last)
      << " h=" << format_fixed6(orb.log_jacobian_sum / static_cast<double>(o.n)) << '\n';
  return kExitOk;
}

struct HistOpts {
  std::string orbit, bins = "100", out, pgm, density;
};

int run_hist(const HistOpts& o, std::ostream& out) {
  const auto points = read_points_csv_file(o.orbit);
  const std::size_t dim = points.front().size();
  std::optional<DensityModel> model;
  if (!o.density.empty()) {
    model = parse_density_spec(o.density);
    if (model->dim() != dim) throw ParameterError("--density dimension does not match the orbit");
  }
  if (!o.pgm.empty() && dim != 2) throw ParameterError("--pgm needs a 2D orbit");
  HistogramGrid hist(parse_bins(o.bins, dim));
  for (const auto& p : points) hist.add(p);

  Outputs files;
  files.add(o.out, render([&](std::ostream& os) { write_histogram_csv(os, hist); }));
  if (!o.pgm.empty()) files.add(o.pgm, render([&](std::ostream& os) { write_histogram_pgm(os, hist); }));
  files.write();
  out << "hist points=" << hist.total() << " bins=" << o.bins;
  if (model) out << " tv=" << format_fixed6(tv_distance(hist, *model));
  out << '\n';
  return kExitOk;
}

struct LyapunovOpts {
  std::string map, mode = "empirical", x0;
  std::size_t n = 1000000, cells = 16384;
};

int run_lyapunov(const LyapunovOpts& o, std::ostream& out, std::ostream& err) {
  const auto map = load_map_bundle(o.map).map();
  LyapunovEstimate est;
  if (o.mode == "theoretical") {
    est = lyapunov_theoretical(map, o.cells);
  } else {
    const Point x0 = o.x0.empty() ? default_start(map.dim()) : parse_point(o.x0, map.dim());
    est = lyapunov_empirical(map, x0, o.n);
  }
  out << est.summary() << '\n';
  if (est.warning) err << "warning: quadrature did not settle under refinement; the integrand may not be integrable\n";
  if (!std::isfinite(est.value))
    err << "warning: the orbit reached a point where log|J| is undefined (a floating-point collapse); try --jitter on\n";
  return kExitOk;
}

struct VerifyOpts {
  std::string map, check;
  std::size_t points = 1000;
  std::uint64_t seed = 1;
};

int run_verify(const VerifyOpts& o, std::ostream& out) {
  const auto map = load_map_bundle(o.map).map();
  if (o.points == 0) throw ParameterError("--points must be at least 1");
  const auto pts = random_points(o.points, map.dim(), o.seed);
  double value = 0.0;
  double tol = 0.0;
  if (o.check == "fp-residual") {
    value = fp_residual(map, pts);
    tol = 1e-8;
  } else if (o.check == "roundtrip") {
    for (const auto& x : pts) value = std::max(value, max_abs_diff(map.source().inverse(map.source().forward(x)), x));
    tol = 1e-9;
  } else if (o.check == "uniformity") {
    std::vector<Point> zs;
    for (const auto& x : sample_density(map.source().model(), o.points, o.seed)) zs.push_back(map.source().forward(x));
    const auto ks = ks_uniformity(zs);
    value = *std::max_element(ks.begin(), ks.end());
    tol = 1.9 / std::sqrt(static_cast<double>(o.points));
  } else {
    for (const auto& x : pts)
      value = std::max(value, max_abs_diff(map.target().forward(map.apply(x)), map.uniform().apply(map.source().forward(x))));
    tol = 1e-12;
  }
  const bool pass = value < tol;
  out << "check=" << o.check << " value=" << format_double(value) << " tol=" << format_double(tol) << ' '
      << (pass ? "PASS" : "FAIL") << '\n';
  return pass ? kExitOk : kExitCheckFailed;
}

struct TransportOpts {
  std::string from, to, uniform, jitter = "auto", order, in, out;
};

int run_transport(const TransportOpts& o, std::ostream& out) {
  const auto order = parse_order(o.order);
  const auto source = RosenblattTransform::build(parse_density_spec(o.from), order);
  const auto target = RosenblattTransform::build(parse_density_spec(o.to), order);
  const auto map = IteratedMap::transport(source, target, parse_uniform_map(o.uniform, jitter_policy_from_string(o.jitter)));
  const auto samples = read_points_csv_file(o.in);
  std::vector<Point> pushed;
  pushed.reserve(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (samples[i].size() != map.dim()) throw ParameterError(o.in + ": sample " + std::to_string(i + 1) + " has the wrong dimension");
    try {
      pushed.push_back(map.apply(samples[i]));
    } catch (const DomainError& e) {
      throw DomainError(o.in + ": sample " + std::to_string(i + 1) + ": " + e.what());
    }
  }
  Outputs files;
  files.add(o.out, render([&](std::ostream& os) { write_points_csv(os, pushed); }));
  files.write();
  out << "transport samples=" << pushed.size() << " map=" << map.uniform().to_string() << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------------------
// Figure reproduction

struct ReproduceOpts {
  std::string figure, out_dir, image, jitter = "auto";
  std::size_t n = 1000000;
};

struct Figure {
  Outputs files;
  std::vector<std::string> lines;
};

std::string map_graph_csv(const IteratedMap& map, bool with_logistic) {
  return render([&](std::ostream& os) {
    os << (with_logistic ? "x,m,logistic\n" : "x,m\n");
    for (int i = 0; i < 1000; ++i) {
      const double x = (i + 0.5) / 1000.0;
      os << format_double(x) << ',' << format_double(map.apply(Point{x})[0]);
      if (with_logistic) os << ',' << format_double(4.0 * x * (1.0 - x));
      os << '\n';
    }
  });
}

Figure figure_1d(const ReproduceOpts& o, const std::string& name, const DensityModel& model, const std::string& uspec,
                 bool logistic = false) {
  const auto map = IteratedMap::factorize(RosenblattTransform::build(model), parse_uniform_map(uspec, jitter_policy_from_string(o.jitter)));
  const auto orb = orbit(map, default_start(1), o.n);
  const auto hist = histogram(orb, {100});
  const LyapunovEstimate emp{orb.log_jacobian_sum / static_cast<double>(o.n), LyapunovEstimate::Mode::Empirical, o.n};
  const auto theo = lyapunov_theoretical(map);
  Figure fig;
  const fs::path dir = o.out_dir;
  fig.files.add(dir / (name + "_hist.csv"), render([&](std::ostream& os) { write_histogram_csv(os, hist); }));
  fig.files.add(dir / (name + "_density.csv"), render([&](std::ostream& os) { write_density_csv(os, model, 1000); }));
  fig.files.add(dir / (name + "_map.csv"), map_graph_csv(map, logistic));
  fig.lines.push_back(name + " " + emp.summary());
  fig.lines.push_back(name + " " + theo.summary() + (theo.warning ? " warning" : ""));
  fig.lines.push_back(name + " tv=" + format_fixed6(tv_distance(hist, model)) + " bins=100");
  return fig;
}

Figure figure_table1(const ReproduceOpts& o) {
  Figure fig;
  const std::size_t n = std::min<std::size_t>(o.n, 10000);
  std::ostringstream csv;
  csv << "l,h_empirical,h_theoretical,log_2l\n";
  for (std::uint64_t l : {std::uint64_t{1}, std::uint64_t{2}, std::uint64_t{4}, std::uint64_t{1} << 24, std::uint64_t{1} << 39}) {
    const auto u = parse_uniform_map("triangle:" + std::to_string(l), jitter_policy_from_string(o.jitter));
    const double exact = std::log(2.0 * static_cast<double>(l));
    std::string he = "";
    std::string ht = format_double(u.theoretical_entropy()[0]);
    if (l <= 4) {
      const auto map = IteratedMap::factorize(RosenblattTransform::build(DensityModel::arcsine()), u);
      he = format_double(lyapunov_empirical(map, default_start(1), n).value);
      ht = format_double(lyapunov_theoretical(map).value);
    }
    csv << l << ',' << he << ',' << ht << ',' << format_double(exact) << '\n';
    fig.lines.push_back("table1 l=" + std::to_string(l) + " h_e=" + (he.empty() ? "-" : format_fixed6(*parse_double(he))) +
                        " h_t=" + format_fixed6(*parse_double(ht)) + " log2l=" + format_fixed6(exact));
  }
  fig.files.add(fs::path(o.out_dir) / "table1.csv", csv.str());
  return fig;
}

Figure figure_2d(const ReproduceOpts& o, const std::string& name, const DensityModel& model, const std::string& uspec,
                 std::vector<std::size_t> cell_bins) {
  const auto map = IteratedMap::factorize(RosenblattTransform::build(model), parse_uniform_map(uspec, jitter_policy_from_string(o.jitter)));
  const auto orb = orbit(map, default_start(2), o.n);
  const auto cells = histogram(orb, cell_bins);
  const auto fine = histogram(orb, {64, 64});
  Figure fig;
  const fs::path dir = o.out_dir;
  fig.files.add(dir / (name + "_hist.csv"), render([&](std::ostream& os) { write_histogram_csv(os, fine); }));
  fig.files.add(dir / (name + "_hist.pgm"), render([&](std::ostream& os) { write_histogram_pgm(os, fine); }));
  fig.files.add(dir / (name + "_cells.csv"), render([&](std::ostream& os) { write_histogram_csv(os, cells); }));
  fig.files.add(dir / (name + "_density.csv"), render([&](std::ostream& os) { write_density_csv(os, model); }));
  fig.lines.push_back(name + " map=" + map.uniform().to_string() + " n=" + std::to_string(o.n));
  fig.lines.push_back(name + " tv=" + format_fixed6(tv_distance(cells, model)) + " bins=" + std::to_string(cell_bins[0]) + "x" +
                      std::to_string(cell_bins[1]));
  return fig;
}

Figure figure_coin(const ReproduceOpts& o) {
  GrayImage image;
  Figure fig;
  if (o.image.empty()) {
    image = synthetic_coin();
    fig.files.add(fs::path(o.out_dir) / "coin.pgm", render([&](std::ostream& os) { write_pgm(os, image, true); }));
  } else {
    image = read_pgm_file(o.image);
  }
  const auto model = density_from_image(image);
  auto coin = figure_2d(o, "coin", model, "product(translation:0.6, translation:0.2)", {image.width, image.height});
  auto mixing = figure_2d(o, "coin_asym", model, "product(asym:0.3, asym:0.9)", {image.width, image.height});
  for (auto& f : {&coin, &mixing}) {
    for (auto& file : f->files.files) fig.files.files.push_back(std::move(file));
    for (auto& line : f->lines) fig.lines.push_back(std::move(line));
  }
  return fig;
}

const std::vector<std::string> kFigures = {"mtri", "ramp-t1", "ramp-s3", "logistic", "table1", "checker-baker", "checker-asym", "coin"};

Figure make_figure(const ReproduceOpts& o, const std::string& name) {
  const auto checker = DensityModel::checkerboard(4, 0.25, 1.75);
  if (name == "mtri") return figure_1d(o, name, DensityModel::triangular(), "triangle:1");
  if (name == "ramp-t1") return figure_1d(o, name, DensityModel::ramp(), "triangle:1");
  if (name == "ramp-s3") return figure_1d(o, name, DensityModel::ramp(), "sawtooth:3");
  if (name == "logistic") return figure_1d(o, name, DensityModel::arcsine(), "triangle:1", true);
  if (name == "table1") return figure_table1(o);
  if (name == "checker-baker") return figure_2d(o, name, checker, "baker", {4, 4});
  if (name == "checker-asym") return figure_2d(o, name, checker, "product(asym:0.3, asym:0.9)", {4, 4});
  return figure_coin(o);
}

int run_reproduce(const ReproduceOpts& o, std::ostream& out) {
  if (o.n == 0) throw ParameterError("--n must be at least 1");
  jitter_policy_from_string(o.jitter);
  if (!o.image.empty()) read_pgm_file(o.image);
  const std::vector<std::string> names = o.figure == "all" ? kFigures : std::vector<std::string>{o.figure};
  std::vector<Figure> figures;
  for (const auto& name : names) figures.push_back(make_figure(o, name));
  for (const auto& fig : figures) fig.files.write();
  for (const auto& fig : figures)
    for (const auto& line : fig.lines) out << line << '\n';
  return kExitOk;
}

}  // namespace

GrayImage synthetic_coin(std::size_t size) {
  GrayImage img{size, size, 255, std::vector<std::uint16_t>(size * size)};
  const double s = static_cast<double>(size);
  for (std::size_t r = 0; r < size; ++r) {
    for (std::size_t c = 0; c < size; ++c) {
      const double x = (static_cast<double>(c) + 0.5) / s - 0.5;
      const double y = 0.5 - (static_cast<double>(r) + 0.5) / s;
      const double rad = std::hypot(x, y);
      double v = 24.0;
      if (rad < 0.42) {
        v = 150.0 + 40.0 * std::cos(10.0 * rad) * std::sin(3.0 * std::atan2(y, x));
        if (rad > 0.37) v = 230.0;
      }
      img.pixels[r * size + c] = static_cast<std::uint16_t>(std::lround(std::clamp(v, 0.0, 255.0)));
    }
  }
  return img;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Chaotic maps with prescribed invariant densities", "ifpp"};
  app.config_formatter(std::make_shared<JsonConfig>());
  app.set_config("--config", "", "JSON file with option values (flags take precedence)");
  app.require_subcommand(1);

  BuildMapOpts bm;
  auto* c_build = app.add_subcommand("build-map", "Build a map leaving a density invariant");
  c_build->add_option("--density", bm.density, "Density spec or .pgm image")->required();
  c_build->add_option("--uniform", bm.uniform, "Uniform map spec")->required();
  c_build->add_option("--order", bm.order, "Axis ordering, 1-based (e.g. 2,1)");
  c_build->add_option("--jitter", bm.jitter, "auto, on or off")->capture_default_str();
  c_build->add_option("--out", bm.out, "Map bundle JSON")->required();

  OrbitOpts ob;
  auto* c_orbit = app.add_subcommand("orbit", "Iterate a map and write the orbit as CSV");
  c_orbit->add_option("--map", ob.map, "Map bundle JSON")->required();
  c_orbit->add_option("--x0", ob.x0, "Start point (default 0.3 per axis)");
  c_orbit->add_option("--n", ob.n, "Number of iterations")->capture_default_str();
  c_orbit->add_option("--burnin", ob.burnin, "Iterations discarded first")->capture_default_str();
  c_orbit->add_option("--thin", ob.thin, "Keep every k-th iterate")->capture_default_str();
  c_orbit->add_flag("--via-uniform", ob.via_uniform, "Iterate the uniform map and pull back");
  c_orbit->add_option("--out", ob.out, "Orbit CSV")->required();

  HistOpts hs;
  auto* c_hist = app.add_subcommand("hist", "Histogram an orbit");
  c_hist->add_option("--orbit", hs.orbit, "Orbit CSV")->required();
  c_hist->add_option("--bins", hs.bins, "Bins per axis, e.g. 100 or 64,64")->capture_default_str();
  c_hist->add_option("--density", hs.density, "Density spec to report the TV distance against");
  c_hist->add_option("--out", hs.out, "Histogram CSV")->required();
  c_hist->add_option("--pgm", hs.pgm, "16-bit PGM image of a 2D histogram");

  LyapunovOpts ly;
  auto* c_lyap = app.add_subcommand("lyapunov", "Estimate the Lyapunov exponent");
  c_lyap->add_option("--map", ly.map, "Map bundle JSON")->required();
  c_lyap->add_option("--mode", ly.mode, "empirical or theoretical")->check(CLI::IsMember({"empirical", "theoretical"}))->capture_default_str();
  c_lyap->add_option("--n", ly.n, "Orbit length (empirical)")->capture_default_str();
  c_lyap->add_option("--cells", ly.cells, "Quadrature cells (theoretical)")->capture_default_str();
  c_lyap->add_option("--x0", ly.x0, "Start point (empirical)");

  VerifyOpts vf;
  auto* c_verify = app.add_subcommand("verify", "Run a numerical check on a map");
  c_verify->add_option("--map", vf.map, "Map bundle JSON")->required();
  c_verify->add_option("--check", vf.check, "fp-residual, roundtrip, uniformity or commute")
      ->required()
      ->check(CLI::IsMember({"fp-residual", "roundtrip", "uniformity", "commute"}));
  c_verify->add_option("--points", vf.points, "Number of test points")->capture_default_str();
  c_verify->add_option("--seed", vf.seed, "Random seed")->capture_default_str();

  TransportOpts tp;
  auto* c_transport = app.add_subcommand("transport", "Push samples of one density onto another");
  c_transport->add_option("--from", tp.from, "Source density spec")->required();
  c_transport->add_option("--to", tp.to, "Target density spec")->required();
  c_transport->add_option("--uniform", tp.uniform, "Uniform map spec")->required();
  c_transport->add_option("--order", tp.order, "Axis ordering, 1-based");
  c_transport->add_option("--jitter", tp.jitter, "auto, on or off")->capture_default_str();
  c_transport->add_option("--in", tp.in, "Sample CSV")->required();
  c_transport->add_option("--out", tp.out, "Output CSV")->required();

  ReproduceOpts rp;
  auto* c_repro = app.add_subcommand("reproduce", "Regenerate figure and table data");
  std::vector<std::string> figure_names = kFigures;
  figure_names.push_back("all");
  c_repro->add_option("--figure", rp.figure, "Figure name or all")->required()->check(CLI::IsMember(figure_names));
  c_repro->add_option("--out-dir", rp.out_dir, "Output directory")->required();
  c_repro->add_option("--n", rp.n, "Orbit length")->capture_default_str();
  c_repro->add_option("--image", rp.image, "PGM image for the coin figure");
  c_repro->add_option("--jitter", rp.jitter, "auto, on or off")->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::FileError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  }

  try {
    if (*c_build) return build_map(bm, out);
    if (*c_orbit) return run_orbit(ob, out);
    if (*c_hist) return run_hist(hs, out);
    if (*c_lyap) return run_lyapunov(ly, out, err);
    if (*c_verify) return run_verify(vf, out);
    if (*c_transport) return run_transport(tp, out);
    return run_reproduce(rp, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  }
}

}  // namespace ifpp::cli
