#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "obstacle/artifacts.hpp"
#include "obstacle/runner.hpp"
#include "obstacle/scenario.hpp"
#include "obstacle/version.hpp"

namespace {

obstacle::ScenarioConfig load_config(const std::string& arg,
                                     const std::string& command) {
  if (arg.empty()) {
    if (command == "identity-test") return obstacle::ScenarioConfig{};
    std::string names;
    for (const auto& n : obstacle::builtin_scenario_names()) {
      if (!names.empty()) names += ", ";
      names += n;
    }
    throw std::invalid_argument("missing --config (a file path or one of: " +
                                names + ")");
  }
  if (std::filesystem::exists(arg))
    return obstacle::parse_config(obstacle::read_text_file(arg));
  // not a file: accept a builtin scenario name directly
  return obstacle::builtin_scenario(arg);
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"bilateral obstacle problem solver and analyzer"};
  app.set_version_flag("--version", obstacle::kVersion);
  app.require_subcommand(1);

  std::string config_arg, solver = "both", out_dir;
  std::uint64_t seed = 0;
  app.add_option("--config", config_arg,
                 "config file path or builtin scenario name");
  app.add_option("--solver", solver, "which solver to run")
      ->check(CLI::IsMember({"penalized", "direct", "both"}));
  CLI::Option* seed_opt =
      app.add_option("--seed", seed, "override the config seed");
  app.add_option("--out", out_dir, "override the output directory");

  const char* commands[][2] = {
      {"solve", "solve and write solution.csv + report.json"},
      {"verify", "solve and check invariants, report only"},
      {"analyze", "solve and write the full analysis tables"},
      {"sweep-h", "solve at h, h/2, h/4 and report observed orders"},
      {"sweep-delta", "penalization sweep over delta levels"},
      {"identity-test", "random min-max reduction self check"},
  };
  for (const auto& c : commands) app.add_subcommand(c[0], c[1])->fallthrough();

  CLI11_PARSE(app, argc, argv);

  obstacle::RunOptions opt;
  opt.command = app.get_subcommands().front()->get_name();
  opt.solver = solver;
  if (seed_opt->count() > 0) opt.seed = seed;
  opt.out_dir = out_dir;

  try {
    const obstacle::ScenarioConfig cfg = load_config(config_arg, opt.command);
    const obstacle::RunOutcome outcome = obstacle::run_scenario(cfg, opt);
    for (const std::string& line : outcome.log) std::printf("%s\n", line.c_str());
    if (!outcome.solution_path.empty())
      std::printf("wrote %s\n", outcome.solution_path.c_str());
    if (!outcome.report_path.empty())
      std::printf("wrote %s\n", outcome.report_path.c_str());
    if (!outcome.analysis_path.empty())
      std::printf("wrote %s\n", outcome.analysis_path.c_str());
    std::printf("%s\n", outcome.message.c_str());
    return outcome.exit_code;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return obstacle::kExitInvariant;
  }
}
