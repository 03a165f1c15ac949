#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "scenario.hpp"

namespace colombeau::cli {

struct CommandOutcome {
  bool pass = false;
  std::string summary;
  std::vector<std::filesystem::path> files;
};

inline const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"classify", "compose", "expmap", "hermite"};
  return names;
}

// Runs one command and writes <out>/<command>.json plus its CSV files.
CommandOutcome run_command(const std::string& command, const Scenario& scenario,
                           const std::filesystem::path& out);

CommandOutcome run_classify(const Scenario& scenario, const std::filesystem::path& out);
CommandOutcome run_compose(const Scenario& scenario, const std::filesystem::path& out);
CommandOutcome run_expmap(const Scenario& scenario, const std::filesystem::path& out);
CommandOutcome run_hermite(const Scenario& scenario, const std::filesystem::path& out);

}  // namespace colombeau::cli
