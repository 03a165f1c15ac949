#include "report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "colombeau/errors.hpp"

namespace colombeau::cli {

namespace {

void write_value(const Json& value, int indent, std::string& out) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
  switch (value.type()) {
    case Json::value_t::object: {
      if (value.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (const auto& [key, item] : value.items()) {
        if (!first) out += ",\n";
        first = false;
        out += inner + Json(key).dump() + ": ";
        write_value(item, indent + 1, out);
      }
      out += "\n" + pad + "}";
      return;
    }
    case Json::value_t::array: {
      if (value.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      bool first = true;
      for (const auto& item : value) {
        if (!first) out += ",\n";
        first = false;
        out += inner;
        write_value(item, indent + 1, out);
      }
      out += "\n" + pad + "]";
      return;
    }
    case Json::value_t::number_float:
      out += format_double(value.get<double>());
      return;
    default:
      out += value.dump();
      return;
  }
}

Json optional_int(const std::optional<int>& v) { return v ? Json(*v) : Json(nullptr); }
Json optional_double(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

const char* direction_name(BoundDirection d) { return d == BoundDirection::decay ? "decay" : "growth"; }

}  // namespace

std::string format_double(double value) {
  if (!std::isfinite(value)) return "null";
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

std::string dump(const Json& value) {
  std::string out;
  write_value(value, 0, out);
  out += "\n";
  return out;
}

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t hash = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 1099511628211ULL;
  }
  return hash;
}

std::string hex64(std::uint64_t value) {
  char buffer[17];
  std::snprintf(buffer, sizeof buffer, "%016llx", static_cast<unsigned long long>(value));
  return buffer;
}

Json to_json(const Verdict& verdict) { return verdict.to_string(); }

Json to_json(const GrowthReport& r) {
  return {{"eps", r.eps},         {"values", r.values},
          {"slope", r.slope},     {"r2", r.r2},
          {"verdict", to_json(r.verdict)},
          {"boundary_flag", r.boundary_flag},
          {"q", optional_int(r.q)}, {"diagnostics", r.diagnostics}};
}

Json to_json(const UltraReport& r) {
  Json cells = Json::array();
  for (const auto& c : r.cells) {
    cells.push_back({{"h", c.h}, {"k", c.k}, {"moderate_bound", c.moderate_bound},
                     {"ideal_bound", c.ideal_bound}});
  }
  return {{"growth", to_json(r.growth)},
          {"type", r.type == UltraType::roumieu ? "roumieu" : "beurling"},
          {"moderate", r.moderate},
          {"ideal", r.ideal},
          {"witness_h", optional_double(r.witness_h)},
          {"witness_k", optional_double(r.witness_k)},
          {"cells", cells},
          {"growth_function_truncated", r.growth_function_truncated}};
}

Json to_json(const CompositionReport& r) {
  return {{"max_discrepancy", r.max_discrepancy},
          {"sample_points", r.sample_points},
          {"lhs", r.lhs},
          {"rhs", r.rhs},
          {"tolerance", r.tolerance},
          {"pass", r.pass},
          {"warnings", r.warnings}};
}

Json to_json(const KernelGrowthReport& r) {
  return {{"growth", to_json(r.growth)},
          {"q1", r.q1},
          {"q2", r.q2},
          {"nominal_exponent", r.nominal_exponent},
          {"corrected_exponent", r.corrected_exponent},
          {"margin_nominal", r.margin_nominal},
          {"margin_corrected", r.margin_corrected},
          {"exceeds_nominal", r.exceeds_nominal},
          {"within_corrected", r.within_corrected},
          {"note", r.note}};
}

Json to_json(const ExpReport& r) {
  return {{"value", r.value},
          {"identity_term", r.identity_term},
          {"terms", r.terms},
          {"ratios", r.ratios},
          {"terms_used", r.terms_used},
          {"last_term", r.last_term},
          {"converged", r.converged}};
}

Json to_json(const ModerationReport& r) {
  Json entries = Json::array();
  for (const auto& e : r.entries) {
    entries.push_back({{"name", e.name},
                       {"p", e.p},
                       {"q_prime", e.q_prime},
                       {"output_values", e.output_values},
                       {"input_values", e.input_values},
                       {"ratios", e.ratios},
                       {"ratio_slope", e.ratio_slope},
                       {"ratio_verdict", to_json(e.ratio_verdict)},
                       {"output_verdict", to_json(e.output_verdict)},
                       {"boundary_flag", e.boundary_flag}});
  }
  return {{"l", r.l}, {"eps", r.eps}, {"entries", entries}};
}

Json to_json(const DecayCheckReport& r) {
  return {{"direction", direction_name(r.direction)},
          {"h", r.h},
          {"margins", r.margins},
          {"margin_min", r.margin_min},
          {"margin_max", r.margin_max},
          {"log_constant", r.log_constant},
          {"worst_index", r.worst_index},
          {"holds_with_unit_constant", r.holds_with_unit_constant},
          {"pass", r.pass}};
}

Json to_json(const InclusionBoundReport& r) {
  return {{"eps", r.eps},
          {"log_constants", r.log_constants},
          {"slope", r.slope},
          {"r2", r.r2},
          {"growth_check_passed", r.growth_check_passed},
          {"uniform_bound_holds", r.uniform_bound_holds},
          {"violations", r.violations},
          {"violation_index", r.violation_index},
          {"violation_eps", r.violation_eps},
          {"truncated", r.truncated}};
}

Json to_json(const ConditionReport& r) {
  return {{"m1", {{"holds", r.m1.holds},
                  {"first_violation", r.m1.first_violation},
                  {"printed_form", r.m1.printed_form}}},
          {"m2", {{"holds", r.m2.holds}, {"c", r.m2.c}, {"H", r.m2.H}}},
          {"m3", {{"partial_sum", r.m3.partial_sum},
                  {"converged", r.m3.converged},
                  {"tail_estimate", r.m3.tail_estimate},
                  {"limit_estimate", r.m3.limit_estimate},
                  {"decay_exponent", r.m3.decay_exponent}}}};
}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

CsvTable& CsvTable::add(std::vector<std::string> row) {
  if (row.size() != header_.size()) throw ShapeError("CSV row width does not match the header");
  rows_.push_back(std::move(row));
  return *this;
}

std::string CsvTable::str() const {
  std::string out;
  auto line = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += cells[i];
    }
    out += '\n';
  };
  line(header_);
  for (const auto& r : rows_) line(r);
  return out;
}

std::string CsvTable::cell(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  return format_double(value);
}

std::string CsvTable::cell(long long value) { return std::to_string(value); }

std::string CsvTable::cell(std::string_view text) {
  if (text.find_first_of(",\"\n") == std::string_view::npos) return std::string(text);
  std::string quoted = "\"";
  for (char c : text) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + "\"";
}

void write_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ResourceError("cannot open " + path.string() + " for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw ResourceError("failed writing " + path.string());
}

}  // namespace colombeau::cli
