#include "clusterdd/commands.hpp"

#include <chrono>
#include <cmath>
#include <vector>

#include "clusterdd/csv.hpp"

namespace clusterdd {

namespace {

namespace fs = std::filesystem;

std::string hypothesis_name(Hypothesis h) {
    return h == Hypothesis::H0 ? "H0" : "H1";
}

std::vector<double> arg_double_list(const nlohmann::json& args, const char* key,
                                    std::vector<double> fallback) {
    if (!args.contains(key)) return fallback;
    try {
        return args.at(key).get<std::vector<double>>();
    } catch (const nlohmann::json::exception&) {
        throw ConfigError(std::string("argument '") + key +
                          "' must be a list of numbers");
    }
}

std::vector<std::string> arg_string_list(const nlohmann::json& args,
                                         const char* key,
                                         std::vector<std::string> fallback) {
    if (!args.contains(key)) return fallback;
    try {
        return args.at(key).get<std::vector<std::string>>();
    } catch (const nlohmann::json::exception&) {
        throw ConfigError(std::string("argument '") + key +
                          "' must be a list of strings");
    }
}

void check_rule_fits(const ExperimentConfig& cfg, FusionRule rule) {
    if ((rule == FusionRule::SingleClusterEG ||
         rule == FusionRule::SingleClusterMR) &&
        cfg.grid_dim != 1) {
        throw ConfigError(std::string(rule_name(rule)) +
                          " requires a single-cluster layout (grid_dim = 1)");
    }
    if (rule == FusionRule::SingleClusterEG &&
        cfg.channel.scheme != Scheme::dEGTC) {
        throw ConfigError("single-cluster-dEGTC requires channel.scheme = dEGTC");
    }
    if (rule == FusionRule::SingleClusterMR &&
        cfg.channel.scheme != Scheme::dMRTC) {
        throw ConfigError("single-cluster-dMRTC requires channel.scheme = dMRTC");
    }
}

void require_fixed_target(const RawConfig& raw, const char* command) {
    if (raw.placement != "fixed") {
        throw ConfigError(std::string(command) +
                          " needs target.placement = fixed (the analytic "
                          "columns are evaluated at one target position)");
    }
}

void write_moments_csv(const RawConfig& raw, const nlohmann::json& args,
                       const fs::path& path) {
    require_fixed_target(raw, "moments");
    const std::vector<double> lambdas =
        arg_double_list(args, "lambdas", {0.5, 1.0, 2.5, 5.0});

    CsvWriter csv(path);
    csv.row({"lambda", "scheme", "alpha", "hypothesis", "cluster", "mean_emp",
             "mean_se", "mean_analytic", "var_emp", "var_se", "var_analytic"});
    for (const double lambda : lambdas) {
        RawConfig point = raw;
        point.lambda = {lambda};
        const ExperimentConfig cfg = point.resolve();
        const ClusterLayout layout = cfg.layout();
        const TargetParams target{cfg.target_power, cfg.target_position};
        const MomentSummary analytic =
            moment_summary(layout, cfg.lambda, target, cfg.sensing, cfg.channel,
                           cfg.quad_tol);
        for (Hypothesis hyp : {Hypothesis::H0, Hypothesis::H1}) {
            const TrialBatch batch = run_trials(cfg, hyp);
            const EmpiricalMoments emp = empirical_moments(batch);
            const int j = static_cast<int>(hyp);
            for (int m = 0; m < cfg.clusters(); ++m) {
                csv.row({format_double(lambda),
                         scheme_name(cfg.channel.scheme),
                         format_double(cfg.channel.path_loss),
                         hypothesis_name(hyp), std::to_string(m),
                         format_double(emp.ybar.mean[m]),
                         format_double(emp.ybar.mean_se[m]),
                         format_double(analytic.ybar_mean(m, j)),
                         format_double(emp.ybar.var[m]),
                         format_double(emp.ybar.var_se[m]),
                         format_double(analytic.ybar_var(m, j))});
            }
        }
    }
    csv.close();
}

void write_roc_csv(const RawConfig& raw, const nlohmann::json& args,
                   const fs::path& path) {
    const ExperimentConfig cfg = raw.resolve();
    std::vector<FusionRule> rules;
    for (const std::string& name :
         arg_string_list(args, "rules", {raw.rule})) {
        rules.push_back(rule_from_name(name));
    }
    for (FusionRule rule : rules) check_rule_fits(cfg, rule);
    const auto max_points =
        static_cast<std::size_t>(args.value("max_points", 4000));

    const TrialBatch h0 = run_trials(cfg, Hypothesis::H0);
    const TrialBatch h1 = run_trials(cfg, Hypothesis::H1);
    const std::vector<StatisticSeries> stats =
        evaluate_rules(cfg, rules, h0, h1);

    CsvWriter csv(path);
    csv.row({"rule", "pfa", "pd"});
    for (const StatisticSeries& s : stats) {
        const std::vector<RocPoint> curve = roc(s.h0, s.h1);
        const std::size_t stride =
            std::max<std::size_t>(1, (curve.size() + max_points - 1) / max_points);
        for (std::size_t i = 0; i < curve.size(); i += stride) {
            csv.row({rule_name(s.rule), format_double(curve[i].pfa),
                     format_double(curve[i].pd)});
        }
        const RocPoint& last = curve.back();
        if ((curve.size() - 1) % stride != 0) {
            csv.row({rule_name(s.rule), format_double(last.pfa),
                     format_double(last.pd)});
        }
    }
    csv.close();
}

void write_sweep_csv(const RawConfig& raw, const nlohmann::json& args,
                     const fs::path& path) {
    const std::string vary = args.value("vary", std::string("clusters"));
    std::vector<double> grid;
    if (vary == "clusters") {
        grid = arg_double_list(args, "grid", {1, 4, 9, 16});
    } else if (vary == "lambda") {
        grid = arg_double_list(args, "grid", {0.5, 1.0, 2.5, 5.0});
    } else if (vary == "snr") {
        grid = arg_double_list(args, "grid", {0, 5, 10, 15, 20, 25});
    } else {
        throw ConfigError("sweep: --vary must be clusters, lambda or snr");
    }
    const double pfa_target = args.value("pfa", 0.05);
    if (!(pfa_target > 0) || !(pfa_target < 1)) {
        throw ConfigError("sweep: pfa must lie in (0, 1)");
    }
    std::vector<FusionRule> rules;
    for (const std::string& name :
         arg_string_list(args, "rules", {raw.rule})) {
        rules.push_back(rule_from_name(name));
    }

    CsvWriter csv(path);
    csv.row({"value", "rule", "pd", "se"});
    for (const double value : grid) {
        RawConfig point = raw;
        if (vary == "clusters") {
            const int k = static_cast<int>(std::lround(std::sqrt(value)));
            if (k < 1 || k * k != static_cast<int>(std::lround(value))) {
                throw ConfigError(
                    "sweep: cluster counts must be perfect squares");
            }
            point.grid_dim = k;
        } else if (vary == "lambda") {
            point.lambda = {value};
        } else {
            point.snr_ch_db = value;
        }
        const ExperimentConfig cfg = point.resolve();
        for (FusionRule rule : rules) check_rule_fits(cfg, rule);
        const TrialBatch h0 = run_trials(cfg, Hypothesis::H0);
        const TrialBatch h1 = run_trials(cfg, Hypothesis::H1);
        const std::vector<StatisticSeries> stats =
            evaluate_rules(cfg, rules, h0, h1);
        for (const StatisticSeries& s : stats) {
            const PdEstimate est = pd_at_pfa(s.h0, s.h1, pfa_target);
            csv.row({format_double(value), rule_name(s.rule),
                     format_double(est.pd), format_double(est.se)});
        }
    }
    csv.close();
}

void write_power_csv(const RawConfig& raw, const nlohmann::json& args,
                     const fs::path& path) {
    const std::vector<double> cluster_grid =
        arg_double_list(args, "clusters", {1, 4, 9, 16, 25});

    CsvWriter csv(path);
    csv.row({"clusters", "scheme", "alpha", "p_emp", "se", "p_exact",
             "p_approx"});
    for (const double value : cluster_grid) {
        const int k = static_cast<int>(std::lround(std::sqrt(value)));
        if (k < 1 || k * k != static_cast<int>(std::lround(value))) {
            throw ConfigError("power: cluster counts must be perfect squares");
        }
        RawConfig point = raw;
        point.grid_dim = k;
        const ExperimentConfig cfg = point.resolve();
        const TrialBatch h0 = run_trials(cfg, Hypothesis::H0);
        const PowerEstimate emp = empirical_power(h0, cfg.channel.sn_power);
        const CombinerMoments cm =
            combiner_moments(cfg.channel.scheme, cfg.channel.fading_scale_sq);
        const double radius = circumscribed_radius(cfg.layout());
        const double pfa =
            local_pfa(cfg.sensing.threshold, cfg.sensing.noise_std);
        const double exact = power_circular_exact(
            radius, cfg.channel.ref_distance, cfg.lambda[0],
            cfg.channel.sn_power, cfg.channel.path_loss, pfa, cm);
        const double approx = power_circular_approx(
            radius, cfg.channel.ref_distance, cfg.lambda[0],
            cfg.channel.sn_power, cfg.channel.path_loss, pfa, cm);
        // "An arbitrary CH": cluster 0 is representative, all clusters are
        // exchangeable under H0.
        csv.row({std::to_string(k * k), scheme_name(cfg.channel.scheme),
                 format_double(cfg.channel.path_loss),
                 format_double(emp.mean[0]), format_double(emp.se[0]),
                 format_double(exact), format_double(approx)});
    }
    csv.close();
}

void write_deflection_csv(const RawConfig& raw, const nlohmann::json& /*args*/,
                          const fs::path& path) {
    require_fixed_target(raw, "deflection");
    if (raw.lambda.size() != 1) {
        throw ConfigError("deflection needs a scalar deployment.lambda");
    }
    RawConfig single = raw;
    single.grid_dim = 1;
    // The single-cluster rules are irrelevant here; force a cluster rule so
    // resolve() does not reject the layout change.
    single.rule = "MER-N";
    const ExperimentConfig cfg = single.resolve();
    const ClusterLayout layout = cfg.layout();
    const TargetParams target{cfg.target_power, cfg.target_position};
    const double pfa = local_pfa(cfg.sensing.threshold, cfg.sensing.noise_std);
    const ThinningField thinning{
        pfa, [&](const Vec2& x) { return local_pd(x, target, cfg.sensing); }};
    const ClusterIntegrals ints = cluster_integrals(
        layout.cell(0), layout.ch_positions.row(0).transpose(),
        cfg.channel.path_loss, cfg.channel.ref_distance, thinning, cfg.quad_tol);

    CsvWriter csv(path);
    csv.row({"scheme", "g_tc", "d2"});
    for (Scheme scheme : {Scheme::dMRTC, Scheme::dEGTC}) {
        csv.row({scheme_name(scheme), format_double(combining_gain(scheme)),
                 format_double(deflection(cfg.lambda[0], scheme, ints))});
    }
    csv.close();
}

}  // namespace

RunManifest run_command(const std::string& command, const RawConfig& raw,
                        const nlohmann::json& args, const fs::path& out_dir) {
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) {
        throw IoError("cannot create output directory " + out_dir.string() +
                      ": " + ec.message());
    }

    const auto started = std::chrono::steady_clock::now();
    const fs::path csv_path = out_dir / (command + ".csv");
    if (command == "moments") {
        write_moments_csv(raw, args, csv_path);
    } else if (command == "roc") {
        write_roc_csv(raw, args, csv_path);
    } else if (command == "sweep") {
        write_sweep_csv(raw, args, csv_path);
    } else if (command == "power") {
        write_power_csv(raw, args, csv_path);
    } else if (command == "deflection") {
        write_deflection_csv(raw, args, csv_path);
    } else {
        throw ConfigError("unknown command '" + command + "'");
    }
    const auto finished = std::chrono::steady_clock::now();

    RunManifest manifest;
    manifest.command = command;
    manifest.config_text = raw.to_text();
    manifest.args = args;
    manifest.master_seed = raw.seed;
    manifest.outputs.emplace_back(csv_path.filename().string(),
                                  fnv1a64_file(csv_path));
    manifest.duration_seconds =
        std::chrono::duration<double>(finished - started).count();
    write_manifest(manifest, out_dir / "manifest.json");
    return manifest;
}

RunManifest rerun_manifest(const fs::path& manifest_path,
                           const fs::path& out_dir) {
    const RunManifest recorded = read_manifest(manifest_path);
    const RawConfig raw = parse_config(recorded.config_text,
                                       manifest_path.string() + "#config");
    return run_command(recorded.command, raw, recorded.args, out_dir);
}

}  // namespace clusterdd
