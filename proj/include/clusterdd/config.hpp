#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "clusterdd/montecarlo.hpp"

namespace clusterdd {

/// Configuration or usage problem; maps to exit code 2 in the CLI.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// I/O problem; maps to exit code 4 in the CLI.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The experiment parameters exactly as the config file expresses them.
/// An empty file leaves every default in place; resolve() derives the
/// simulation-ready ExperimentConfig (noise levels from SNRs, the local
/// threshold from the false-alarm target) and validates everything.
struct RawConfig {
    // [layout]
    double side = 100.0;
    int grid_dim = 2;
    // [deployment] scalar broadcasts to every cluster
    std::vector<double> lambda{1.0};
    // [target]
    double target_power = 10.0;
    std::string placement = "fixed";  // fixed | uniform
    double target_x = 20.0;
    double target_y = 20.0;
    double margin_side = 85.0;
    // [sensing]
    double eta = 2.0;
    double d0 = 1.0;
    double snr_s_db = 12.0;
    double pfa = 0.01;
    // [channel]
    std::string scheme = "dEGTC";
    double alpha = 2.0;
    double r0 = 1.0;
    double sigma_h2 = 0.7071067811865475244;  // 1/sqrt(2)
    double ptx = 1.0;
    double pm = 1.0;
    double snr_ch_db = 20.0;
    double snr_fc_db = 20.0;
    // [fusion]
    std::string rule = "MOR-N";
    // [run]
    long long trials = 10000;
    std::uint64_t seed = 20260801ull;
    double quad_tol = 1e-8;

    ExperimentConfig resolve() const;

    /// Canonical full-precision round-trippable text (same format the parser
    /// reads); parse_config(to_text()) reproduces this struct bit-exactly.
    std::string to_text() const;
};

/// Parses sectioned key = value text. Unknown sections or keys, malformed
/// values and duplicate keys are ConfigErrors carrying origin:line.
RawConfig parse_config(const std::string& text, const std::string& origin);

/// Reads and parses a config file. A missing path is an IoError; an empty
/// file yields all defaults.
RawConfig load_config(const std::string& path);

FusionRule rule_from_name(const std::string& name);
Scheme scheme_from_name(const std::string& name);

}  // namespace clusterdd
