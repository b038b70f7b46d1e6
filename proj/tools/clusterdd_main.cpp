// Command-line front end: experiment orchestration and CSV emission.

#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "clusterdd/commands.hpp"
#include "clusterdd/config.hpp"
#include "clusterdd/montecarlo.hpp"
#include "clusterdd/quadrature.hpp"

namespace {

using clusterdd::ConfigError;
using clusterdd::IoError;

std::vector<std::string> split_list(const std::string& csv) {
    std::vector<std::string> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::vector<double> split_doubles(const std::string& csv, const char* what) {
    std::vector<double> out;
    for (const std::string& item : split_list(csv)) {
        double v = 0;
        const auto res = std::from_chars(item.data(), item.data() + item.size(), v);
        if (res.ec != std::errc{} || res.ptr != item.data() + item.size()) {
            throw ConfigError(std::string(what) + ": not a number: '" + item + "'");
        }
        out.push_back(v);
    }
    if (out.empty()) {
        throw ConfigError(std::string(what) + ": empty list");
    }
    return out;
}

clusterdd::RawConfig load_or_default(const std::string& path) {
    clusterdd::RawConfig raw;
    if (!path.empty()) {
        raw = clusterdd::load_config(path);
    }
    if (const char* env = std::getenv("CLUSTERDD_MASTER_SEED")) {
        const std::string s(env);
        std::uint64_t seed = 0;
        const auto res = std::from_chars(s.data(), s.data() + s.size(), seed);
        if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
            throw ConfigError("CLUSTERDD_MASTER_SEED: not an unsigned integer");
        }
        raw.seed = seed;
    }
    return raw;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Clustered-WSN distributed detection simulator"};
    app.set_version_flag("--version", std::string(clusterdd::kToolVersion));
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    int threads = 0;

    std::string lambdas_csv, rules_csv, grid_csv, clusters_csv, vary = "clusters";
    double pfa_target = 0.05;
    int max_points = 4000;
    std::string manifest_path;

    auto add_common = [&](CLI::App* sub, bool with_config) {
        if (with_config) {
            sub->add_option("config", config_path,
                            "Config file (omit for built-in defaults)");
        }
        sub->add_option("--out", out_dir, "Output directory")->required();
        sub->add_option("--threads", threads,
                        "Worker threads (0 = hardware); results do not depend "
                        "on this");
    };

    CLI::App* moments = app.add_subcommand(
        "moments", "Empirical vs analytic CH-signal moments over a lambda sweep");
    add_common(moments, true);
    moments->add_option("--lambdas", lambdas_csv,
                        "Comma-separated intensity grid (default 0.5,1,2.5,5)");

    CLI::App* roc_cmd =
        app.add_subcommand("roc", "Empirical ROC curves for fusion rules");
    add_common(roc_cmd, true);
    roc_cmd->add_option("--rules", rules_csv,
                        "Comma-separated rule names (default: config rule)");
    roc_cmd->add_option("--max-points", max_points,
                        "Cap on emitted ROC points per rule");

    CLI::App* sweep = app.add_subcommand(
        "sweep", "Detection probability at fixed P_FA versus a varied parameter");
    add_common(sweep, true);
    sweep->add_option("--vary", vary, "clusters | lambda | snr")->required();
    sweep->add_option("--grid", grid_csv, "Comma-separated values to sweep");
    sweep->add_option("--pfa", pfa_target, "False-alarm operating point");
    sweep->add_option("--rules", rules_csv, "Comma-separated rule names");

    CLI::App* power = app.add_subcommand(
        "power", "Received CH power: empirical vs closed forms across cluster counts");
    add_common(power, true);
    power->add_option("--clusters", clusters_csv,
                      "Comma-separated cluster counts (perfect squares)");

    CLI::App* deflection =
        app.add_subcommand("deflection", "Combining gains and deflection coefficients");
    add_common(deflection, true);

    CLI::App* rerun = app.add_subcommand(
        "rerun", "Reproduce a recorded run byte-for-byte from its manifest");
    rerun->add_option("manifest", manifest_path, "Path to manifest.json")->required();
    add_common(rerun, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        clusterdd::set_worker_threads(threads);
        nlohmann::json args = nlohmann::json::object();
        std::string command;
        if (app.got_subcommand(moments)) {
            command = "moments";
            if (!lambdas_csv.empty())
                args["lambdas"] = split_doubles(lambdas_csv, "--lambdas");
        } else if (app.got_subcommand(roc_cmd)) {
            command = "roc";
            if (!rules_csv.empty()) args["rules"] = split_list(rules_csv);
            args["max_points"] = max_points;
        } else if (app.got_subcommand(sweep)) {
            command = "sweep";
            args["vary"] = vary;
            if (!grid_csv.empty()) args["grid"] = split_doubles(grid_csv, "--grid");
            args["pfa"] = pfa_target;
            if (!rules_csv.empty()) args["rules"] = split_list(rules_csv);
        } else if (app.got_subcommand(power)) {
            command = "power";
            if (!clusters_csv.empty())
                args["clusters"] = split_doubles(clusters_csv, "--clusters");
        } else if (app.got_subcommand(deflection)) {
            command = "deflection";
        } else if (app.got_subcommand(rerun)) {
            clusterdd::rerun_manifest(manifest_path, out_dir);
            return 0;
        }
        const clusterdd::RawConfig raw = load_or_default(config_path);
        clusterdd::run_command(command, raw, args, out_dir);
        return 0;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return 4;
    } catch (const clusterdd::QuadratureError& e) {
        std::cerr << "quadrature failure: " << e.what()
                  << " (estimate " << e.estimate() << ", bound "
                  << e.error_bound() << ")\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
