// Subcommand implementations behind the CLI: each runs its suite, writes a
// versioned machine-readable result record (plus side outputs) into the
// configured directory, and reports an exit status.
#pragma once

#include <string>

#include "qlc/run_config.hpp"

namespace qlc {

struct CommandResult {
    int exit_code = 0;        // 0 iff all non-skipped checks pass
    std::string record_json;  // serialized result record
    std::string record_path;  // where it was written ("" if not written)
};

CommandResult cmd_verify(const RunConfig& cfg);
CommandResult cmd_coercivity(const RunConfig& cfg);
CommandResult cmd_minimize(const RunConfig& cfg);
CommandResult cmd_sweep(const RunConfig& cfg);

}  // namespace qlc
