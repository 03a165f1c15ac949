#include "catalog.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "colombeau/errors.hpp"

namespace colombeau::cli {

Params::Params(const Json& object, std::string path) : object_(object), path_(std::move(path)) {
  if (!object_.is_object()) throw ConfigError(path_ + ": expected an object");
}

const Json& Params::require(const std::string& key) {
  auto it = object_.find(key);
  if (it == object_.end()) throw ConfigError(path_of(key) + ": missing required parameter");
  used_.push_back(key);
  return *it;
}

bool Params::has(const std::string& key) const { return object_.contains(key); }

double Params::number(const std::string& key) {
  const Json& v = require(key);
  if (!v.is_number()) throw ConfigError(path_of(key) + ": expected a number");
  return v.get<double>();
}

double Params::number(const std::string& key, double fallback) {
  return has(key) ? number(key) : fallback;
}

int Params::integer(const std::string& key) {
  const Json& v = require(key);
  if (!v.is_number_integer()) throw ConfigError(path_of(key) + ": expected an integer");
  return v.get<int>();
}

int Params::integer(const std::string& key, int fallback) { return has(key) ? integer(key) : fallback; }

bool Params::boolean(const std::string& key, bool fallback) {
  if (!has(key)) return fallback;
  const Json& v = require(key);
  if (!v.is_boolean()) throw ConfigError(path_of(key) + ": expected true or false");
  return v.get<bool>();
}

std::string Params::text(const std::string& key) {
  const Json& v = require(key);
  if (!v.is_string()) throw ConfigError(path_of(key) + ": expected a string");
  return v.get<std::string>();
}

std::string Params::text(const std::string& key, const std::string& fallback) {
  return has(key) ? text(key) : fallback;
}

std::vector<double> Params::numbers(const std::string& key) {
  const Json& v = require(key);
  if (!v.is_array()) throw ConfigError(path_of(key) + ": expected an array of numbers");
  std::vector<double> out;
  for (const auto& item : v) {
    if (!item.is_number()) throw ConfigError(path_of(key) + ": expected an array of numbers");
    out.push_back(item.get<double>());
  }
  return out;
}

std::vector<double> Params::numbers(const std::string& key, std::vector<double> fallback) {
  return has(key) ? numbers(key) : std::move(fallback);
}

const Json& Params::object(const std::string& key) { return require(key); }

void Params::finish() const {
  for (const auto& [key, value] : object_.items()) {
    if (std::find(used_.begin(), used_.end(), key) == used_.end()) {
      throw ConfigError(path_of(key) + ": unknown parameter");
    }
  }
}

namespace {

std::string family_of(const Json& entry, const std::string& path,
                      const std::vector<std::string>& known) {
  if (!entry.is_object()) throw ConfigError(path + ": expected a catalog entry object");
  auto it = entry.find("family");
  if (it == entry.end() || !it->is_string()) throw ConfigError(path + ".family: missing family name");
  const std::string name = it->get<std::string>();
  if (std::find(known.begin(), known.end(), name) == known.end()) {
    throw ConfigError(path + ".family: unknown catalog family '" + name + "'");
  }
  return name;
}

// Re-labels library errors raised while building catalog objects.
template <class Build>
auto building(const std::string& path, Build&& build) -> decltype(build()) {
  try {
    return build();
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

std::vector<double> hermite_coefficients(Params& p) {
  if (p.has("coefficients")) return p.numbers("coefficients");
  if (p.has("ones")) {
    const int length = p.integer("ones");
    if (length < 1) throw ConfigError(p.path_of("ones") + ": length must be positive");
    return std::vector<double>(static_cast<std::size_t>(length), 1.0);
  }
  if (p.has("index")) {
    const int index = p.integer("index");
    const int length = p.integer("length", index + 1);
    if (index < 0 || length <= index) throw ConfigError(p.path_of("index") + ": index outside length");
    return HermiteExpansion::unit(static_cast<std::size_t>(index), static_cast<std::size_t>(length))
        .coefficients;
  }
  throw ConfigError(p.path() + ": hermite_series needs coefficients, ones or index");
}

ScalarField hermite_product(int left, int right) {
  const ScalarField hx = hermite_field(left);
  const ScalarField hy = hermite_field(right);
  return ScalarField(
      2,
      [hx, hy](std::span<const double> xy) {
        return hx.eval_unchecked(xy.subspan(0, 1)) * hy.eval_unchecked(xy.subspan(1, 1));
      },
      [hx, hy](const MultiIndex& a, std::span<const double> xy) {
        return hx.derivative(MultiIndex{a[0]}, xy.subspan(0, 1)) *
               hy.derivative(MultiIndex{a[1]}, xy.subspan(1, 1));
      });
}

double integer_power_derivative(int power, int order, double t) {
  if (order > power) return 0.0;
  double falling = 1.0;
  for (int i = 0; i < order; ++i) falling *= power - i;
  return falling * std::pow(t, power - order);
}

}  // namespace

FunctionNet make_net(const Json& entry, const EpsilonGrid& grid, std::size_t n,
                     const std::string& path) {
  const std::string family = family_of(entry, path, net_families());
  Params p(entry, path);
  p.text("family");
  return building(path, [&]() -> FunctionNet {
    if (family == "gaussian") {
      // amplitude ε^{-eps_power} e^{-rate |x|^2}; a negative rate grows.
      const double amplitude = p.number("amplitude", 1.0);
      const double rate = p.number("rate", 1.0);
      const double power = p.number("eps_power", 0.0);
      p.finish();
      return FunctionNet::generate(grid, [&](double eps) {
        return gaussian_field(n, amplitude * std::pow(eps, -power), rate);
      });
    }
    if (family == "mollifier") {
      // (ε√π)^{-n} e^{-|x|^2/ε^2}
      p.finish();
      return FunctionNet::generate(grid, [&](double eps) {
        const double norm = std::pow(eps * std::sqrt(std::numbers::pi), -static_cast<double>(n));
        return gaussian_field(n, norm, 1.0 / (eps * eps));
      });
    }
    if (family == "polynomial") {
      // Σ c_k |x|^{2k}, the same field for every ε.
      const auto coefficients = p.numbers("coefficients");
      p.finish();
      const ScalarField f = radial_polynomial_field(n, coefficients);
      return FunctionNet::generate(grid, [&](double) { return f; });
    }
    if (family == "power_net") {
      // ε^{-power} Σ c_k |x|^{2k}
      const double power = p.number("power");
      const auto coefficients = p.numbers("coefficients", {1.0});
      p.finish();
      const ScalarField f = radial_polynomial_field(n, coefficients);
      return FunctionNet::generate(grid, [&](double eps) { return scale(std::pow(eps, -power), f); });
    }
    if (family == "negligible_net") {
      // e^{-c/ε} times a base entry (default: the constant 1).
      const double c = p.number("c", 1.0);
      if (!(c > 0.0)) throw ConfigError(p.path_of("c") + ": must be positive");
      const FunctionNet base =
          p.has("base") ? make_net(p.object("base"), grid, n, p.path_of("base"))
                        : FunctionNet::generate(grid, [&](double) { return constant_field(n, 1.0); });
      p.finish();
      std::vector<ScalarField> fields;
      for (std::size_t i = 0; i < grid.size(); ++i) {
        fields.push_back(scale(std::exp(-c / grid[i]), base.field_at(i)));
      }
      return FunctionNet(grid, std::move(fields));
    }
    // hermite_series: Σ b_k h_k, the same field for every ε.
    if (n != 1) throw ConfigError(path + ": hermite_series is one-dimensional");
    const HermiteExpansion e(hermite_coefficients(p));
    p.finish();
    const ScalarField f = synthesize_field(e);
    return FunctionNet::generate(grid, [&](double) { return f; });
  });
}

GeneralizedOperator make_operator(const Json& entry, const EpsilonGrid& grid, std::size_t n,
                                  const QuadratureSpec& quadrature, const std::string& path) {
  const std::string family = family_of(entry, path, kernel_families());
  Params p(entry, path);
  p.text("family");
  return building(path, [&]() -> GeneralizedOperator {
    if (family == "gaussian_kernel") {
      // amplitude e^{-rate (|x|^2 + |y|^2)}
      const double amplitude = p.number("amplitude", 1.0);
      const double rate = p.number("rate", 1.0);
      p.finish();
      if (!(rate > 0.0)) throw ConfigError(p.path_of("rate") + ": must be positive");
      const ScalarField k = gaussian_field(2 * n, amplitude, rate);
      return GeneralizedOperator(
          KernelNet::generate(grid, n, [&](double) { return k; }, KernelDecay{rate, rate}), quadrature);
    }
    if (n != 1) throw ConfigError(path + ": " + family + " is defined for n = 1");
    if (family == "rank_one_kernel") {
      // scale h_left(x) h_right(y)
      const int left = p.integer("left", 0);
      const int right = p.integer("right", 0);
      const double factor = p.number("scale", 1.0);
      p.finish();
      const ScalarField k = scale(factor, hermite_product(left, right));
      return GeneralizedOperator(
          KernelNet::generate(grid, n, [&](double) { return k; }, KernelDecay{0.5, 0.5}), quadrature);
    }
    // monomial_kernel: coefficient x^{x_power} y^{y_power}
    const int px = p.integer("x_power", 2);
    const int py = p.integer("y_power", 2);
    const double c = p.number("coefficient", 1.0);
    p.finish();
    if (px < 0 || py < 0) throw ConfigError(path + ": monomial powers must be >= 0");
    const ScalarField k(
        2,
        [=](std::span<const double> xy) { return c * std::pow(xy[0], px) * std::pow(xy[1], py); },
        [=](const MultiIndex& a, std::span<const double> xy) {
          return c * integer_power_derivative(px, a[0], xy[0]) * integer_power_derivative(py, a[1], xy[1]);
        });
    return GeneralizedOperator(KernelNet::generate(grid, n, [&](double) { return k; }), quadrature);
  });
}

WeightSequence make_weight(const Json& entry, const std::string& path) {
  Params p(entry, path);
  const std::string family = p.text("family");
  return building(path, [&]() -> WeightSequence {
    if (family == "gevrey") {
      const double s = p.number("s");
      const int length = p.integer("max_index", static_cast<int>(kDefaultWeightLength));
      p.finish();
      if (length < 16) throw ConfigError(p.path_of("max_index") + ": must be >= 16");
      return gevrey(s, static_cast<std::size_t>(length));
    }
    if (family == "log_values") {
      auto values = p.numbers("values");
      const std::string name = p.text("name", "custom");
      p.finish();
      return WeightSequence(name, std::move(values));
    }
    throw ConfigError(path + ".family: unknown weight family '" + family + "'");
  });
}

namespace {

std::vector<double> read_coefficient_file(const std::filesystem::path& file, const std::string& path) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw ConfigError(path + ": cannot open " + file.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    // Byte offset to line:column for the diagnostic.
    const std::size_t offset = std::min<std::size_t>(e.byte, text.size());
    std::size_t line = 1;
    std::size_t column = 1;
    for (std::size_t i = 0; i + 1 < offset; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw ConfigError(file.string() + ":" + std::to_string(line) + ":" + std::to_string(column) +
                      ": " + e.what());
  }
  if (!doc.is_array()) throw ConfigError(file.string() + ": expected a JSON array of coefficients");
  std::vector<double> out;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    if (!doc[i].is_number()) {
      throw ConfigError(file.string() + ": entry " + std::to_string(i) + " is not a number");
    }
    out.push_back(doc[i].get<double>());
  }
  return out;
}

}  // namespace

HermiteSource make_hermite_source(const Json& entry, int N, const EpsilonGrid& grid,
                                  const std::filesystem::path& base_dir, const std::string& path) {
  Params p(entry, path);
  HermiteSource source;
  if (p.has("expand")) {
    const FunctionNet net = make_net(p.object("expand"), grid, 1, p.path_of("expand"));
    const int nodes = p.integer("nodes", 4096);
    p.finish();
    const ExpansionResult r = building(path, [&] { return expand(net.field_at(0), N, nodes); });
    source.expansion = r.expansion;
    source.expanded = true;
    source.boundary_flag = r.boundary_flag;
    source.tail_energy = r.tail_energy;
    return source;
  }
  std::vector<double> b;
  if (p.has("file")) {
    b = read_coefficient_file(base_dir / p.text("file"), p.path_of("file"));
  } else {
    b = hermite_coefficients(p);
  }
  p.finish();
  source.expansion = building(path, [&] { return HermiteExpansion(std::move(b)); });
  return source;
}

}  // namespace colombeau::cli
