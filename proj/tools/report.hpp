#pragma once

// Deterministic report output: JSON with 17 significant digits and sorted
// keys, CSV series, and the scenario fingerprint.

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "colombeau/hermite.hpp"
#include "colombeau/operators.hpp"
#include "colombeau/seminorms.hpp"
#include "colombeau/weights.hpp"

namespace colombeau::cli {

using Json = nlohmann::json;

inline constexpr std::string_view kToolName = "colombeau";
inline constexpr std::string_view kToolVersion = "0.1.0";

// %.17g; NaN and infinities have no JSON form and become null.
std::string format_double(double value);

// Two-space indented JSON; objects keep nlohmann's sorted key order.
std::string dump(const Json& value);

std::uint64_t fnv1a(std::string_view bytes);
std::string hex64(std::uint64_t value);

Json to_json(const Verdict& verdict);
Json to_json(const GrowthReport& report);
Json to_json(const UltraReport& report);
Json to_json(const CompositionReport& report);
Json to_json(const KernelGrowthReport& report);
Json to_json(const ExpReport& report);
Json to_json(const ModerationReport& report);
Json to_json(const DecayCheckReport& report);
Json to_json(const InclusionBoundReport& report);
Json to_json(const ConditionReport& report);

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);

  CsvTable& add(std::vector<std::string> row);
  std::string str() const;
  std::size_t rows() const noexcept { return rows_.size(); }

  static std::string cell(double value);
  static std::string cell(long long value);
  static std::string cell(std::string_view text);

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

// Writes the whole file or throws ResourceError.
void write_file(const std::filesystem::path& path, std::string_view content);

}  // namespace colombeau::cli
