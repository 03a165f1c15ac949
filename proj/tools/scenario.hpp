#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "report.hpp"

#include "colombeau/core.hpp"
#include "colombeau/operators.hpp"

namespace colombeau::cli {

struct Overrides {
  std::optional<int> nodes;
  std::optional<int> eps_levels;
  std::optional<double> tol;
};

// A parsed scenario file. `document` has the command-line overrides folded
// in, so the hash identifies exactly what was run.
struct Scenario {
  std::string name;
  Json document;
  std::filesystem::path base_dir;
  std::uint64_t seed = 0;
  std::size_t n = 1;
  EpsilonGrid grid = EpsilonGrid::geometric();
  SamplingBox box{};
  QuadratureSpec quadrature{};
  std::string hash;

  // The command's section; ConfigError when absent.
  const Json& section(const std::string& command) const;
};

Scenario parse_scenario(const Json& document, const std::filesystem::path& base_dir,
                        const Overrides& overrides);
Scenario load_scenario(const std::filesystem::path& file, const Overrides& overrides);

EpsilonGrid make_grid(const Json& entry, const std::string& path);
SamplingBox make_box(const Json& entry, const std::string& path);

// Uniform points in [-range, range]^n from a 64-bit Mersenne stream; the
// double conversion uses the top 53 bits so it does not depend on the
// standard library's distribution implementations.
std::vector<Point> random_points(std::uint64_t seed, std::size_t count, std::size_t n, double range);

}  // namespace colombeau::cli
