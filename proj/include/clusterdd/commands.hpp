#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "clusterdd/config.hpp"
#include "clusterdd/manifest.hpp"

namespace clusterdd {

/// Executes one subcommand against a resolved configuration, writing
/// <command>.csv and manifest.json into out_dir. `args` carries the
/// command-specific options; missing entries take their documented defaults.
/// Returns the manifest that was written.
///
/// Commands and their args:
///   moments    {"lambdas": [..]}                      sweep of the intensity
///   roc        {"rules": ["MOR-N", ...], "max_points": n}
///   sweep      {"vary": "clusters|lambda|snr", "grid": [..],
///               "pfa": p, "rules": [..]}
///   power      {"clusters": [1, 4, ...]}
///   deflection {}
RunManifest run_command(const std::string& command, const RawConfig& raw,
                        const nlohmann::json& args,
                        const std::filesystem::path& out_dir);

/// Re-executes a previously recorded run; outputs are byte-identical to the
/// original for any worker count.
RunManifest rerun_manifest(const std::filesystem::path& manifest_path,
                           const std::filesystem::path& out_dir);

}  // namespace clusterdd
