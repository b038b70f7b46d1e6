#include "clusterdd/manifest.hpp"

#include <fstream>
#include <sstream>

#include "clusterdd/config.hpp"

namespace clusterdd {

std::string fnv1a64_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open file for checksum: " + path.string());
    }
    std::uint64_t hash = 0xcbf29ce484222325ull;
    char buf[4096];
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
        const std::streamsize got = in.gcount();
        for (std::streamsize i = 0; i < got; ++i) {
            hash ^= static_cast<unsigned char>(buf[i]);
            hash *= 0x100000001b3ull;
        }
    }
    std::ostringstream hex;
    hex << std::hex;
    hex.width(16);
    hex.fill('0');
    hex << hash;
    return hex.str();
}

void write_manifest(const RunManifest& manifest,
                    const std::filesystem::path& path) {
    nlohmann::json j;
    j["tool"] = manifest.tool;
    j["version"] = manifest.version;
    j["command"] = manifest.command;
    j["config"] = manifest.config_text;
    j["args"] = manifest.args;
    j["master_seed"] = manifest.master_seed;
    nlohmann::json outputs = nlohmann::json::array();
    for (const auto& [file, checksum] : manifest.outputs) {
        outputs.push_back({{"file", file}, {"fnv1a64", checksum}});
    }
    j["outputs"] = outputs;
    j["duration_seconds"] = manifest.duration_seconds;

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot write manifest: " + path.string());
    }
    out << j.dump(2) << "\n";
    if (!out) {
        throw IoError("write failed: " + path.string());
    }
}

RunManifest read_manifest(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open manifest: " + path.string());
    }
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("malformed manifest " + path.string() + ": " + e.what());
    }
    RunManifest m;
    try {
        m.tool = j.at("tool").get<std::string>();
        m.version = j.at("version").get<std::string>();
        m.command = j.at("command").get<std::string>();
        m.config_text = j.at("config").get<std::string>();
        m.args = j.at("args");
        m.master_seed = j.at("master_seed").get<std::uint64_t>();
        for (const auto& o : j.at("outputs")) {
            m.outputs.emplace_back(o.at("file").get<std::string>(),
                                   o.at("fnv1a64").get<std::string>());
        }
        m.duration_seconds = j.value("duration_seconds", 0.0);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("manifest " + path.string() +
                          " is missing fields: " + e.what());
    }
    return m;
}

}  // namespace clusterdd
