#ifndef READOUT_COMMANDS_HPP
#define READOUT_COMMANDS_HPP

#include <string>

#include "scenario_config.hpp"

namespace readout::cli {

// Each command writes CSV files (one-line JSON metadata comment first) into
// `out_dir` and returns a process exit code: 0 ok, 2 config error,
// 3 numerical-guard failure.

int cmd_amplitudes(const ScenarioConfig& cfg, const std::string& out_dir);
int cmd_sme(const ScenarioConfig& cfg, const std::string& out_dir);
int cmd_sweep(const ScenarioConfig& cfg, const std::string& out_dir);
int cmd_ramsey(const ScenarioConfig& cfg, const std::string& out_dir);
int cmd_filters(const ScenarioConfig& cfg, const std::string& out_dir);

}  // namespace readout::cli

#endif
