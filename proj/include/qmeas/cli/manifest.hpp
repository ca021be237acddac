#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace qmeas::cli {

/// Written once per command, atomically (temp file + rename), after every
/// other output file exists. Each output appears in exactly one entry.
struct RunManifest {
    std::string command;
    std::string config_hash; // fnv1a-64 of the raw config text
    std::string tool_version;
    std::string timestamp; // ISO-8601 UTC
    std::uint64_t seed = 0;
    std::vector<std::string> outputs; // file names relative to the output dir
};

std::string fnv1a_hex(std::string_view data);

std::string iso8601_utc_now();

void write_manifest(const std::filesystem::path& out_dir, const RunManifest& manifest);

} // namespace qmeas::cli
