#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace qmeas::cli {

struct CommandOptions {
    std::filesystem::path config_path; // may be empty for verify
    std::optional<std::filesystem::path> out_dir; // overrides outputs.directory
    std::uint64_t seed = 1;
    std::optional<std::string> format; // restrict outputs to "csv" or "json"
    int verify_instances = 200;
    int mc_draws = 10000;
};

/// Exit codes: 0 success, 1 config error, 2 verification failure,
/// 3 runtime error (containment, orthogonal post-selection, ...).
int cmd_ps(const CommandOptions& options, std::ostream& log);
int cmd_pps(const CommandOptions& options, std::ostream& log);
int cmd_verify(const CommandOptions& options, std::ostream& log);
int cmd_sensitivity(const CommandOptions& options, std::ostream& log);

} // namespace qmeas::cli
