#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace clusterdd {

inline constexpr const char* kToolName = "clusterdd";
inline constexpr const char* kToolVersion = "0.1.0";

/// Record of one CLI run: the resolved configuration snapshot, the command
/// and its arguments, the seed, and a checksum per output file. The manifest
/// alone is enough to reproduce the outputs byte for byte.
struct RunManifest {
    std::string tool = kToolName;
    std::string version = kToolVersion;
    std::string command;
    std::string config_text;  // canonical serialized configuration
    nlohmann::json args = nlohmann::json::object();
    std::uint64_t master_seed = 0;
    std::vector<std::pair<std::string, std::string>> outputs;  // file, fnv1a64
    double duration_seconds = 0;
};

void write_manifest(const RunManifest& manifest,
                    const std::filesystem::path& path);

RunManifest read_manifest(const std::filesystem::path& path);

/// FNV-1a 64-bit digest of a file's bytes, lowercase hex.
std::string fnv1a64_file(const std::filesystem::path& path);

}  // namespace clusterdd
