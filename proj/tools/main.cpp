// colombeau classify|compose|expmap|hermite --scenario <path> --out <dir>
//   [--nodes N] [--eps-levels K] [--tol T]
// Exit codes: 0 pass, 1 check failed, 2 configuration error, 3 internal error.

#include <cstdio>
#include <exception>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "commands.hpp"
#include "colombeau/errors.hpp"

namespace {

enum ExitCode { kPass = 0, kCheckFailed = 1, kConfigError = 2, kInternalError = 3 };

}  // namespace

int main(int argc, char** argv) {
  using namespace colombeau::cli;

  CLI::App app{"Numerical checks for tempered generalised functions and integral operators"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);

  std::string scenario_path;
  std::string out_dir;
  std::optional<int> nodes;
  std::optional<int> eps_levels;
  std::optional<double> tol;

  for (const std::string& name : command_names()) {
    CLI::App* sub = app.add_subcommand(name, "run the " + name + " scenario section");
    sub->add_option("--scenario", scenario_path, "scenario JSON file")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "directory for the JSON and CSV reports")->required();
    sub->add_option("--nodes", nodes, "Gauss-Hermite nodes per axis")->check(CLI::Range(8, 512));
    sub->add_option("--eps-levels", eps_levels, "number of ε-grid levels")->check(CLI::Range(4, 64));
    sub->add_option("--tol", tol, "verification / truncation tolerance")->check(CLI::PositiveNumber);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kConfigError;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    const Scenario scenario = load_scenario(scenario_path, Overrides{nodes, eps_levels, tol});
    const CommandOutcome outcome = run_command(command, scenario, out_dir);
    std::printf("%s %s [%s]: %s: %s\n", command.c_str(), scenario.name.c_str(), scenario.hash.c_str(),
                outcome.pass ? "pass" : "check failed", outcome.summary.c_str());
    for (const auto& file : outcome.files) std::printf("  wrote %s\n", file.string().c_str());
    return outcome.pass ? kPass : kCheckFailed;
  } catch (const colombeau::ConfigError& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return kConfigError;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return kInternalError;
  }
}
