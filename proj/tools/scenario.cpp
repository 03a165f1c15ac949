#include "scenario.hpp"

#include <fstream>
#include <random>
#include <sstream>

#include "catalog.hpp"
#include "colombeau/errors.hpp"

namespace colombeau::cli {

const Json& Scenario::section(const std::string& command) const {
  auto it = document.find(command);
  if (it == document.end() || !it->is_object()) {
    throw ConfigError("scenario '" + name + "' has no \"" + command + "\" section");
  }
  return *it;
}

EpsilonGrid make_grid(const Json& entry, const std::string& path) {
  Params p(entry, path);
  try {
    if (p.has("values")) {
      auto values = p.numbers("values");
      p.finish();
      return EpsilonGrid(std::move(values));
    }
    const int levels = p.integer("levels", 12);
    const double first = p.number("first", 0.5);
    const double ratio = p.number("ratio", 0.5);
    p.finish();
    if (levels < 1) throw ConfigError(p.path_of("levels") + ": must be positive");
    return EpsilonGrid::geometric(static_cast<std::size_t>(levels), first, ratio);
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

SamplingBox make_box(const Json& entry, const std::string& path) {
  Params p(entry, path);
  SamplingBox box;
  box.half_width = p.number("half_width", box.half_width);
  box.points_per_axis = p.integer("points_per_axis", box.points_per_axis);
  p.finish();
  try {
    box.validate();
  } catch (const Error& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return box;
}

Scenario parse_scenario(const Json& source, const std::filesystem::path& base_dir,
                        const Overrides& overrides) {
  if (!source.is_object()) throw ConfigError("scenario: top level must be an object");
  Json document = source;
  if (overrides.eps_levels) {
    if (*overrides.eps_levels < 4) throw ConfigError("--eps-levels: need at least 4 levels");
    Json& grid = document["grid"];
    if (grid.is_null()) grid = Json::object();
    if (grid.contains("values")) {
      auto values = grid["values"];
      if (values.is_array() && values.size() > static_cast<std::size_t>(*overrides.eps_levels)) {
        values.erase(values.begin() + *overrides.eps_levels, values.end());
      }
      grid["values"] = values;
    } else {
      grid["levels"] = *overrides.eps_levels;
    }
  }
  if (overrides.nodes) document["quadrature"]["nodes"] = *overrides.nodes;
  if (overrides.tol) document["tol"] = *overrides.tol;

  Scenario s;
  s.base_dir = base_dir;
  Params p(document, "scenario");
  s.name = p.text("name", "unnamed");
  const int seed = p.integer("seed", 0);
  if (seed < 0) throw ConfigError("scenario.seed: must be >= 0");
  s.seed = static_cast<std::uint64_t>(seed);
  const int n = p.integer("n", 1);
  if (n < 1 || n > 2) throw ConfigError("scenario.n: must be 1 or 2");
  s.n = static_cast<std::size_t>(n);
  if (p.has("grid")) s.grid = make_grid(p.object("grid"), "scenario.grid");
  if (p.has("box")) s.box = make_box(p.object("box"), "scenario.box");
  if (p.has("quadrature")) {
    Params q(p.object("quadrature"), "scenario.quadrature");
    s.quadrature.nodes = q.integer("nodes", s.quadrature.nodes);
    s.quadrature.method = q.text("method", s.quadrature.method);
    s.quadrature.check_convergence = q.boolean("check_convergence", s.quadrature.check_convergence);
    s.quadrature.relative_tolerance = q.number("relative_tolerance", s.quadrature.relative_tolerance);
    q.finish();
    if (s.quadrature.nodes < 8 || s.quadrature.nodes > kMaxGaussHermiteNodes) {
      throw ConfigError("scenario.quadrature.nodes: must be in [8, 512]");
    }
  }
  // Command sections and the shared tolerance are read by the commands.
  for (const char* key : {"tol", "classify", "compose", "expmap", "hermite", "description"}) {
    if (p.has(key)) p.object(key);
  }
  p.finish();
  s.document = std::move(document);
  s.hash = hex64(fnv1a(dump(s.document)));
  return s;
}

Scenario load_scenario(const std::filesystem::path& file, const Overrides& overrides) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw ConfigError("cannot open scenario " + file.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  Json document;
  try {
    document = Json::parse(buffer.str());
  } catch (const Json::parse_error& e) {
    throw ConfigError(file.string() + ": " + e.what());
  }
  return parse_scenario(document, file.parent_path(), overrides);
}

std::vector<Point> random_points(std::uint64_t seed, std::size_t count, std::size_t n, double range) {
  std::mt19937_64 rng(seed);
  std::vector<Point> points(count, Point(n));
  for (auto& x : points) {
    for (double& c : x) {
      const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
      c = range * (2.0 * u - 1.0);
    }
  }
  return points;
}

}  // namespace colombeau::cli
