#pragma once

#include <iosfwd>
#include <string>

#include "narrowgap/config.hpp"

namespace narrowgap {

/// Exit codes of the command-line front end.
enum ExitCode : int { exit_ok = 0, exit_check_failed = 1, exit_config_error = 2 };

struct RunOptions {
    std::string out_dir = "narrowgap_run";
    int threads = 1;
};

int cmd_asym(const RunConfig& cfg, const RunOptions& opt, std::ostream& log);
int cmd_solve(const RunConfig& cfg, const RunOptions& opt, std::ostream& log);
int cmd_sweep(const RunConfig& cfg, const RunOptions& opt, std::ostream& log);
int cmd_check_geometry(const RunConfig& cfg, const RunOptions& opt, std::ostream& log);

/// Parses arguments, runs one subcommand and maps failures to exit codes.
int run_cli(int argc, char** argv);

}  // namespace narrowgap
