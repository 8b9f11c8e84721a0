// Command-line front end: one subcommand per run, configuration from a
// sectioned key = value file, optional seed and output-directory overrides.
//
// Usage:
//   qlc <verify|coercivity|minimize|sweep> --config <path> [--seed N] [--out DIR]
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <string>

#include "qlc/commands.hpp"

namespace {

void usage() {
    std::fprintf(stderr,
                 "usage: qlc <verify|coercivity|minimize|sweep> --config <path>"
                 " [--seed <u64>] [--out <dir>]\n");
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        usage();
        return 2;
    }
    const std::string command = argv[1];
    std::string config_path, out_override, seed_override;
    for (int i = 2; i < argc; ++i) {
        const std::string arg = argv[i];
        auto next = [&](const char* flag) -> std::string {
            if (i + 1 >= argc) {
                std::fprintf(stderr, "missing value for %s\n", flag);
                std::exit(2);
            }
            return argv[++i];
        };
        if (arg == "--config")
            config_path = next("--config");
        else if (arg == "--seed")
            seed_override = next("--seed");
        else if (arg == "--out")
            out_override = next("--out");
        else {
            std::fprintf(stderr, "unknown argument: %s\n", arg.c_str());
            usage();
            return 2;
        }
    }
    if (config_path.empty()) {
        std::fprintf(stderr, "--config is required\n");
        usage();
        return 2;
    }

    try {
        qlc::RunConfig cfg = qlc::parse_run_config(config_path);
        if (!seed_override.empty()) cfg.seed = std::stoull(seed_override);
        if (!out_override.empty()) cfg.out_dir = out_override;

        qlc::CommandResult result;
        if (command == "verify")
            result = qlc::cmd_verify(cfg);
        else if (command == "coercivity")
            result = qlc::cmd_coercivity(cfg);
        else if (command == "minimize")
            result = qlc::cmd_minimize(cfg);
        else if (command == "sweep")
            result = qlc::cmd_sweep(cfg);
        else {
            std::fprintf(stderr, "unknown command: %s\n", command.c_str());
            usage();
            return 2;
        }
        std::fputs(result.record_json.c_str(), stdout);
        return result.exit_code;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
