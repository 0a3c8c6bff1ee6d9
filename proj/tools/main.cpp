#include <cstdint>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "covplan/pipeline.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Scenario coverage estimation and acquisition planning"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  unsigned threads = 1;

  app.add_option("--config", config_path, "TOML run configuration")
      ->required()
      ->check(CLI::ExistingFile);
  app.add_option("--seed", seed, "override [cloud].seed");
  app.add_option("--out", out_dir, "output directory (created if missing)");
  app.add_option("--threads", threads, "worker threads; 0 = all hardware threads");

  app.add_subcommand("coverage",
                     "fit a coverage saturation model to a parameter-set CSV");
  app.add_subcommand("metamodel",
                     "measure a generation method across seed amounts");
  app.add_subcommand("plan", "cost-optimal mix of mining and generation");
  app.add_subcommand("synth", "draw synthetic parameter sets");

  CLI11_PARSE(app, argc, argv);

  const std::string command = app.get_subcommands().front()->get_name();
  return covplan::run_cli(command, config_path, seed, out_dir, threads);
}
