#include "qmeas/cli/manifest.hpp"

#include "qmeas/errors.hpp"
#include "qmeas/version.hpp"

#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>

namespace qmeas::cli {

std::string fnv1a_hex(std::string_view data) {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        hash ^= c;
        hash *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
    return buf;
}

std::string iso8601_utc_now() {
    const std::time_t now =
        std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void write_manifest(const std::filesystem::path& out_dir, const RunManifest& manifest) {
    nlohmann::json j;
    j["command"] = manifest.command;
    j["config_hash"] = manifest.config_hash;
    j["tool_version"] = manifest.tool_version;
    j["timestamp"] = manifest.timestamp;
    j["seed"] = manifest.seed;
    j["outputs"] = manifest.outputs;

    const auto temp = out_dir / "run_manifest.json.tmp";
    const auto final_path = out_dir / "run_manifest.json";
    {
        std::ofstream out(temp);
        if (!out) throw Error("cannot write manifest to " + temp.string());
        out << j.dump(2) << "\n";
    }
    std::filesystem::rename(temp, final_path);
}

} // namespace qmeas::cli
