#include "commands.hpp"

#include <cmath>
#include <limits>

#include "catalog.hpp"
#include "colombeau/errors.hpp"

namespace colombeau::cli {

namespace {

namespace fs = std::filesystem;

class Output {
 public:
  Output(const fs::path& dir, std::string command) : dir_(dir), command_(std::move(command)) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) throw ResourceError("cannot create output directory " + dir_.string() + ": " + ec.message());
  }

  void csv(const std::string& name, const CsvTable& table) {
    const fs::path path = dir_ / (command_ + "_" + name + ".csv");
    write_file(path, table.str());
    files_.push_back(path);
  }

  CommandOutcome finish(const Scenario& s, bool pass, Json result, std::string summary) {
    Json report = {{"tool", kToolName},
                   {"version", kToolVersion},
                   {"command", command_},
                   {"scenario", s.name},
                   {"scenario_hash", s.hash},
                   {"pass", pass},
                   {"result", std::move(result)}};
    const fs::path path = dir_ / (command_ + ".json");
    write_file(path, dump(report));
    files_.insert(files_.begin(), path);
    return {pass, std::move(summary), files_};
  }

 private:
  fs::path dir_;
  std::string command_;
  std::vector<fs::path> files_;
};

GrowthOptions growth_options(Params& p) {
  GrowthOptions g;
  g.slope_tolerance = p.number("slope_tolerance", g.slope_tolerance);
  g.r2_threshold = p.number("r2_threshold", g.r2_threshold);
  g.p_max = p.integer("p_max", g.p_max);
  g.q_max = p.integer("q_max", g.q_max);
  return g;
}

// Top-level "tol" (where --tol lands) wins over the section's own value.
double tolerance(const Scenario& s, Params& p, double fallback) {
  const double local = p.number("tol", fallback);
  auto it = s.document.find("tol");
  return it != s.document.end() && it->is_number() ? it->get<double>() : local;
}

std::vector<Point> point_list(Params& p, const std::string& key, std::size_t n) {
  std::vector<Point> points;
  const Json& list = p.object(key);
  if (!list.is_array()) throw ConfigError(p.path_of(key) + ": expected an array of points");
  for (const auto& item : list) {
    Point x;
    if (item.is_number()) {
      x.push_back(item.get<double>());
    } else if (item.is_array()) {
      for (const auto& c : item) {
        if (!c.is_number()) throw ConfigError(p.path_of(key) + ": coordinates must be numbers");
        x.push_back(c.get<double>());
      }
    }
    if (x.size() != n) throw ConfigError(p.path_of(key) + ": points must have dimension " + std::to_string(n));
    points.push_back(std::move(x));
  }
  return points;
}

std::vector<std::string> point_header(std::size_t n) {
  std::vector<std::string> h;
  for (std::size_t i = 1; i <= n; ++i) h.push_back("x" + std::to_string(i));
  return h;
}

void append_point(std::vector<std::string>& row, const Point& x) {
  for (double c : x) row.push_back(CsvTable::cell(c));
}

CsvTable series_table(const std::vector<double>& eps, const std::vector<double>& values,
                      const std::string& column) {
  CsvTable t({"eps", column});
  for (std::size_t i = 0; i < eps.size(); ++i) t.add({CsvTable::cell(eps[i]), CsvTable::cell(values[i])});
  return t;
}

}  // namespace

CommandOutcome run_classify(const Scenario& s, const fs::path& out) {
  Params p(s.section("classify"), "classify");
  const FunctionNet net = make_net(p.object("net"), s.grid, s.n, "classify.net");
  const std::string mode = p.text("mode", "tempered");
  const int l = p.integer("l", 0);
  const std::string expect = p.text("expect", "");
  GrowthOptions g = growth_options(p);

  Output o(out, "classify");
  Json result = {{"mode", mode}, {"l", l}};
  GrowthReport growth;
  if (mode == "tempered") {
    p.finish();
    growth = classify_tempered(net, l, s.box, g);
    result["report"] = to_json(growth);
  } else if (mode == "power") {
    const int q = p.integer("q", 0);
    p.finish();
    growth = classify_power_growth(net, MuSpec{q, l}, s.box, g);
    result["q"] = q;
    result["report"] = to_json(growth);
  } else if (mode == "ultra") {
    Params u(p.object("ultra"), "classify.ultra");
    p.finish();
    const std::string type_name = u.text("type", "roumieu");
    if (type_name != "roumieu" && type_name != "beurling") {
      throw ConfigError("classify.ultra.type: expected roumieu or beurling");
    }
    const WeightSequence M = make_weight(u.object("M"), "classify.ultra.M");
    const WeightSequence N = u.has("N") ? make_weight(u.object("N"), "classify.ultra.N") : M;
    const int cap = u.integer("cap", 6);
    UltraOptions opts;
    opts.h_values = u.numbers("h_values", opts.h_values);
    opts.k_values = u.numbers("k_values", opts.k_values);
    opts.growth = g;
    u.finish();
    const NuSpec spec = [&] {
      try {
        return NuSpec(opts.h_values.empty() ? 1.0 : opts.h_values.front(), M, cap);
      } catch (const Error& e) {
        throw ConfigError(std::string("classify.ultra: ") + e.what());
      }
    }();
    const UltraReport r = classify_ultra(net, spec, N,
                                         type_name == "roumieu" ? UltraType::roumieu : UltraType::beurling,
                                         s.box, opts);
    growth = r.growth;
    result["report"] = to_json(r);
  } else {
    throw ConfigError("classify.mode: unknown mode '" + mode + "' (tempered, power, ultra)");
  }

  const std::string verdict = growth.verdict.to_string();
  result["verdict"] = verdict;
  bool pass = true;
  if (!expect.empty()) {
    result["expected"] = expect;
    pass = verdict == expect;
  }
  o.csv("series", series_table(growth.eps, growth.values, "seminorm"));
  return o.finish(s, pass, std::move(result),
                  "verdict " + verdict + (expect.empty() ? "" : " (expected " + expect + ")"));
}

CommandOutcome run_compose(const Scenario& s, const fs::path& out) {
  Params p(s.section("compose"), "compose");
  const GeneralizedOperator outer = make_operator(p.object("outer"), s.grid, s.n, s.quadrature, "compose.outer");
  const GeneralizedOperator inner = make_operator(p.object("inner"), s.grid, s.n, s.quadrature, "compose.inner");
  const FunctionNet phi = p.has("phi") ? make_net(p.object("phi"), s.grid, s.n, "compose.phi")
                                       : FunctionNet::generate(s.grid, [&](double) { return constant_field(s.n, 1.0); });
  std::vector<Point> points;
  if (p.has("points")) {
    points = point_list(p, "points", s.n);
  } else {
    const int count = p.integer("sample_points", 25);
    const double range = p.number("point_range", 2.0);
    if (count < 1) throw ConfigError("compose.sample_points: must be positive");
    points = random_points(s.seed, static_cast<std::size_t>(count), s.n, range);
  }
  const double tol = tolerance(s, p, 1e-6);

  KernelGrowthOptions growth_opts;
  int q1 = 2;
  int q2 = 2;
  SamplingBox growth_box = s.box;
  if (p.has("growth")) {
    Params g(p.object("growth"), "compose.growth");
    q1 = g.integer("q1", q1);
    q2 = g.integer("q2", q2);
    growth_opts.include_derivatives = g.boolean("include_derivatives", false);
    if (g.has("box")) growth_box = make_box(g.object("box"), "compose.growth.box");
    growth_opts.growth = growth_options(g);
    g.finish();
  }
  p.finish();

  Output o(out, "compose");
  std::vector<std::string> header{"eps"};
  for (auto& h : point_header(s.n)) header.push_back(h);
  for (const char* h : {"lhs", "rhs", "discrepancy"}) header.emplace_back(h);
  CsvTable table(header);

  Json levels = Json::array();
  bool pass = true;
  double worst = 0.0;
  for (double eps : s.grid.values()) {
    const CompositionReport r = verify_composition(outer, inner, phi, eps, points, tol);
    pass = pass && r.pass;
    worst = std::max(worst, r.max_discrepancy);
    Json level = to_json(r);
    level["eps"] = eps;
    levels.push_back(std::move(level));
    for (std::size_t i = 0; i < points.size(); ++i) {
      std::vector<std::string> row{CsvTable::cell(eps)};
      append_point(row, points[i]);
      const double gap = std::abs(r.lhs[i] - r.rhs[i]) /
                         std::max({1.0, std::abs(r.lhs[i]), std::abs(r.rhs[i])});
      for (double v : {r.lhs[i], r.rhs[i], gap}) row.push_back(CsvTable::cell(v));
      table.add(std::move(row));
    }
  }
  o.csv("composition", table);

  const GeneralizedOperator composed = compose(outer, inner);
  const KernelGrowthReport growth = kernel_growth_check(composed, q1, q2, growth_box, growth_opts);
  o.csv("growth", series_table(growth.growth.eps, growth.growth.values, "weighted_sup"));

  Json result = {{"tolerance", tol},
                 {"max_discrepancy", worst},
                 {"levels", levels},
                 {"kernel_growth", to_json(growth)}};
  char buffer[160];
  std::snprintf(buffer, sizeof buffer, "max discrepancy %.3g (tol %.3g); kernel slope %.4f: %s", worst,
                tol, growth.growth.slope, growth.note.c_str());
  return o.finish(s, pass, std::move(result), buffer);
}

CommandOutcome run_expmap(const Scenario& s, const fs::path& out) {
  Params p(s.section("expmap"), "expmap");
  const GeneralizedOperator A = make_operator(p.object("kernel"), s.grid, s.n, s.quadrature, "expmap.kernel");
  const FunctionNet phi = make_net(p.object("phi"), s.grid, s.n, "expmap.phi");
  const int k_max = p.integer("k_max", 8);
  if (k_max < 1) throw ConfigError("expmap.k_max: must be >= 1");
  const double tol = tolerance(s, p, 1e-10);
  const std::vector<Point> points = p.has("points") ? point_list(p, "points", s.n)
                                                    : std::vector<Point>{Point(s.n, 0.0)};
  std::vector<double> eps_list = p.numbers("eps", s.grid.values());
  for (double eps : eps_list) {
    if (!s.grid.contains(eps)) throw ConfigError("expmap.eps: " + format_double(eps) + " is not on the grid");
  }
  p.finish();

  Output o(out, "expmap");
  std::vector<std::string> header{"eps"};
  for (auto& h : point_header(s.n)) header.push_back(h);
  for (const char* h : {"k", "term", "ratio_to_previous"}) header.emplace_back(h);
  CsvTable table(header);

  Json runs = Json::array();
  bool pass = true;
  int failures = 0;
  double largest_last = 0.0;
  for (double eps : eps_list) {
    for (const Point& x : points) {
      const ExpReport r = exp_apply(A, phi, eps, x, k_max, tol);
      if (!r.converged) {
        pass = false;
        ++failures;
      }
      largest_last = std::max(largest_last, std::abs(r.last_term));
      Json run = to_json(r);
      run["eps"] = eps;
      run["x"] = x;
      runs.push_back(std::move(run));

      auto add_row = [&](long long k, double term, double ratio) {
        std::vector<std::string> row{CsvTable::cell(eps)};
        append_point(row, x);
        row.push_back(CsvTable::cell(k));
        row.push_back(CsvTable::cell(term));
        row.push_back(CsvTable::cell(ratio));
        table.add(std::move(row));
      };
      const double nan = std::numeric_limits<double>::quiet_NaN();
      add_row(0, r.identity_term, nan);
      for (std::size_t k = 0; k < r.terms.size(); ++k) {
        add_row(static_cast<long long>(k + 1), r.terms[k], k == 0 ? nan : r.ratios[k - 1]);
      }
    }
  }
  o.csv("terms", table);
  Json result = {{"k_max", k_max}, {"tol", tol}, {"runs", runs}, {"truncation_failures", failures}};
  char buffer[160];
  std::snprintf(buffer, sizeof buffer, "%d truncation failure(s); largest last term %.3g (tol %.3g)",
                failures, largest_last, tol);
  return o.finish(s, pass, std::move(result), buffer);
}

CommandOutcome run_hermite(const Scenario& s, const fs::path& out) {
  Params p(s.section("hermite"), "hermite");
  const int N = p.integer("N", 64);
  if (N < 0 || N > kMaxHermiteIndex) throw ConfigError("hermite.N: must be in [0, 256]");
  const HermiteSource source = make_hermite_source(p.object("source"), N, s.grid, s.base_dir, "hermite.source");
  const WeightSequence M = p.has("M") ? make_weight(p.object("M"), "hermite.M") : gevrey(2.0);
  const double h = p.number("h", 1.0);
  const std::string direction_name = p.text("direction", "growth");
  const std::string damping_name = p.text("damping", "square_of_value");
  p.finish();
  if (!(h > 0.0)) throw ConfigError("hermite.h: must be positive");
  if (direction_name != "growth" && direction_name != "decay") {
    throw ConfigError("hermite.direction: expected growth or decay");
  }
  if (damping_name != "square_of_value" && damping_name != "value_at_square") {
    throw ConfigError("hermite.damping: expected square_of_value or value_at_square");
  }
  const BoundDirection direction = direction_name == "growth" ? BoundDirection::growth : BoundDirection::decay;
  const DampingExponent damping =
      damping_name == "square_of_value" ? DampingExponent::square_of_value : DampingExponent::value_at_square;

  const HermiteExpansion& e = source.expansion;
  const DecayCheckReport decay = coefficient_decay_check(e, M, h, direction);
  const InclusionBoundReport inclusion = verify_inclusion_bound(e, M, h, s.grid, damping);
  const ConditionReport conditions = check_conditions(M);

  bool nonincreasing = true;
  for (std::size_t i = 1; i < inclusion.log_constants.size(); ++i) {
    if (inclusion.log_constants[i] > inclusion.log_constants[i - 1]) nonincreasing = false;
  }

  Output o(out, "hermite");
  CsvTable coefficients({"n", "b_n", "margin"});
  for (std::size_t k = 0; k < e.size(); ++k) {
    coefficients.add({CsvTable::cell(static_cast<long long>(k)), CsvTable::cell(e.coefficients[k]),
                      CsvTable::cell(decay.margins[k])});
  }
  o.csv("coefficients", coefficients);
  CsvTable constants({"eps", "log_c_eps", "c_eps"});
  for (std::size_t i = 0; i < inclusion.eps.size(); ++i) {
    constants.add({CsvTable::cell(inclusion.eps[i]), CsvTable::cell(inclusion.log_constants[i]),
                   CsvTable::cell(std::exp(inclusion.log_constants[i]))});
  }
  o.csv("inclusion", constants);

  Json result = {{"weight", M.name()},
                 {"h", h},
                 {"coefficients", e.coefficients},
                 {"expanded", source.expanded},
                 {"expansion_boundary_flag", source.boundary_flag},
                 {"tail_energy", source.tail_energy},
                 {"decay_check", to_json(decay)},
                 {"inclusion", to_json(inclusion)},
                 {"c_eps_nonincreasing_as_eps_decreases", nonincreasing},
                 {"conditions", to_json(conditions)}};
  const bool pass = inclusion.uniform_bound_holds;
  std::string summary = pass ? "uniform bound holds" : "uniform bound violated";
  if (!pass) {
    summary += " at n=" + std::to_string(inclusion.violation_index) +
               ", eps=" + format_double(inclusion.violation_eps);
  }
  return o.finish(s, pass, std::move(result), summary);
}

CommandOutcome run_command(const std::string& command, const Scenario& scenario, const fs::path& out) {
  if (command == "classify") return run_classify(scenario, out);
  if (command == "compose") return run_compose(scenario, out);
  if (command == "expmap") return run_expmap(scenario, out);
  if (command == "hermite") return run_hermite(scenario, out);
  throw ConfigError("unknown command '" + command + "'");
}

}  // namespace colombeau::cli
