#pragma once
// The five batch commands. Each returns a JSON report, the fields it can
// dump, and an overall pass flag. execute() adds file output and maps
// errors to the exit codes 0 (pass), 1 (computational failure) and 2
// (usage or configuration error).

#include <ostream>
#include <string>
#include <vector>

#include "config.hpp"
#include "report.hpp"

namespace ahlfors::cli {

enum ExitCode : int { kExitPass = 0, kExitFail = 1, kExitUsage = 2 };

struct CommandOutput {
  Json report;
  FieldDump fields;
  bool pass = false;
};

CommandOutput run_verify(const RunConfig& cfg);
CommandOutput run_decompose(const RunConfig& cfg);
CommandOutput run_soliton(const RunConfig& cfg);
CommandOutput run_constraints(const RunConfig& cfg);
CommandOutput run_gen_tt(const RunConfig& cfg);

const std::vector<std::string>& command_names();

// Throws ConfigError for an unknown command.
CommandOutput run_command(const std::string& name, const RunConfig& cfg);

// Runs the command and writes the report (to cfg.report_path, or `out`
// when empty) and the dumps. Messages go to `err`.
int execute(const std::string& name, const RunConfig& cfg, std::ostream& out,
            std::ostream& err);

// Loads the config first; report_override / dump_override replace the
// config's output paths when non-empty.
int execute_file(const std::string& name, const std::string& config_path,
                 const std::string& report_override,
                 const std::string& dump_override, std::ostream& out,
                 std::ostream& err);

}  // namespace ahlfors::cli
