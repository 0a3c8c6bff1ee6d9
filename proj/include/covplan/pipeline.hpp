#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "covplan/config.hpp"

namespace covplan {

struct CommandContext {
  RunConfig config;
  std::string out_dir = ".";
  unsigned threads = 1;
};

// Subcommand bodies. Each writes its artifacts plus resolved_config.toml
// into out_dir and returns the process exit code.
int cmd_coverage(const CommandContext& ctx);   // 0, or 3 when the fit did not converge
int cmd_metamodel(const CommandContext& ctx);  // 0
int cmd_plan(const CommandContext& ctx);       // 0, or 4 when no plan is feasible
int cmd_synth(const CommandContext& ctx);      // 0

// Loads the config, applies overrides, dispatches, and maps exceptions to
// exit codes: 2 for input/contract errors, 1 for anything unexpected.
int run_cli(const std::string& command, const std::string& config_path,
            std::optional<std::uint64_t> seed_override, const std::string& out_dir,
            unsigned threads);

}  // namespace covplan
