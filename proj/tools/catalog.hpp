#pragma once

// Named families that scenarios refer to. Every entry is an object with a
// "family" key plus that family's parameters; unknown families and unknown
// or missing parameters are configuration errors naming the JSON path.

#include <filesystem>
#include <string>
#include <vector>

#include "report.hpp"

#include "colombeau/core.hpp"
#include "colombeau/hermite.hpp"
#include "colombeau/operators.hpp"
#include "colombeau/weights.hpp"

namespace colombeau::cli {

// Reads typed parameters from one JSON object and rejects leftovers.
class Params {
 public:
  Params(const Json& object, std::string path);

  double number(const std::string& key, double fallback);
  double number(const std::string& key);
  int integer(const std::string& key, int fallback);
  int integer(const std::string& key);
  bool boolean(const std::string& key, bool fallback);
  std::string text(const std::string& key, const std::string& fallback);
  std::string text(const std::string& key);
  std::vector<double> numbers(const std::string& key, std::vector<double> fallback);
  std::vector<double> numbers(const std::string& key);
  bool has(const std::string& key) const;
  const Json& object(const std::string& key);  // required sub-object or array
  const std::string& path() const noexcept { return path_; }
  std::string path_of(const std::string& key) const { return path_ + "." + key; }

  // ConfigError for any key that was never read.
  void finish() const;

 private:
  const Json& require(const std::string& key);

  const Json& object_;
  std::string path_;
  std::vector<std::string> used_;
};

inline const std::vector<std::string>& net_families() {
  static const std::vector<std::string> names{"gaussian",       "mollifier",     "polynomial",
                                              "power_net",      "negligible_net", "hermite_series"};
  return names;
}

inline const std::vector<std::string>& kernel_families() {
  static const std::vector<std::string> names{"rank_one_kernel", "gaussian_kernel", "monomial_kernel"};
  return names;
}

FunctionNet make_net(const Json& entry, const EpsilonGrid& grid, std::size_t n,
                     const std::string& path);

GeneralizedOperator make_operator(const Json& entry, const EpsilonGrid& grid, std::size_t n,
                                  const QuadratureSpec& quadrature, const std::string& path);

WeightSequence make_weight(const Json& entry, const std::string& path);

// Coefficients from {"coefficients": [...]}, {"ones": L}, {"index": k,
// "length": L}, {"file": "name.json"} (a JSON array, resolved against
// base_dir) or {"expand": <net entry>} (first-grid field expanded to N).
struct HermiteSource {
  HermiteExpansion expansion;
  bool expanded = false;
  bool boundary_flag = false;
  double tail_energy = 0.0;
};

HermiteSource make_hermite_source(const Json& entry, int N, const EpsilonGrid& grid,
                                  const std::filesystem::path& base_dir, const std::string& path);

}  // namespace colombeau::cli
