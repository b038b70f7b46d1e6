#include "clusterdd/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "clusterdd/csv.hpp"
#include "clusterdd/normal.hpp"

namespace clusterdd {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& value, const std::string& where) {
    double out = 0;
    const char* begin = value.data();
    const char* end = begin + value.size();
    const auto res = std::from_chars(begin, end, out);
    if (res.ec != std::errc{} || res.ptr != end) {
        throw ConfigError(where + ": not a number: '" + value + "'");
    }
    return out;
}

long long parse_int(const std::string& value, const std::string& where) {
    long long out = 0;
    const char* begin = value.data();
    const char* end = begin + value.size();
    const auto res = std::from_chars(begin, end, out);
    if (res.ec != std::errc{} || res.ptr != end) {
        throw ConfigError(where + ": not an integer: '" + value + "'");
    }
    return out;
}

std::uint64_t parse_u64(const std::string& value, const std::string& where) {
    std::uint64_t out = 0;
    const char* begin = value.data();
    const char* end = begin + value.size();
    const auto res = std::from_chars(begin, end, out);
    if (res.ec != std::errc{} || res.ptr != end) {
        throw ConfigError(where + ": not an unsigned integer: '" + value + "'");
    }
    return out;
}

std::vector<double> parse_double_list(const std::string& value,
                                      const std::string& where) {
    std::vector<double> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        out.push_back(parse_double(trim(item), where));
    }
    if (out.empty()) {
        throw ConfigError(where + ": empty list");
    }
    return out;
}

}  // namespace

FusionRule rule_from_name(const std::string& name) {
    if (name == "MOR-N") return FusionRule::MorGaussian;
    if (name == "MOR-L") return FusionRule::MorLognormal;
    if (name == "MER-N") return FusionRule::MerGaussian;
    if (name == "MER-L") return FusionRule::MerLognormal;
    if (name == "single-cluster-dEGTC") return FusionRule::SingleClusterEG;
    if (name == "single-cluster-dMRTC") return FusionRule::SingleClusterMR;
    throw ConfigError(
        "unknown fusion rule '" + name +
        "' (valid: MOR-N, MOR-L, MER-N, MER-L, single-cluster-dEGTC, "
        "single-cluster-dMRTC)");
}

Scheme scheme_from_name(const std::string& name) {
    if (name == "dEGTC") return Scheme::dEGTC;
    if (name == "dMRTC") return Scheme::dMRTC;
    throw ConfigError("unknown combining scheme '" + name +
                      "' (valid: dEGTC, dMRTC)");
}

ExperimentConfig RawConfig::resolve() const {
    ExperimentConfig cfg;
    cfg.region_side = side;
    if (grid_dim < 1) {
        throw ConfigError("layout.grid_dim: must be >= 1");
    }
    cfg.grid_dim = grid_dim;
    const int m_total = grid_dim * grid_dim;

    if (lambda.size() == 1) {
        cfg.lambda = ArrayXd::Constant(m_total, lambda[0]);
    } else if (static_cast<int>(lambda.size()) == m_total) {
        cfg.lambda.resize(m_total);
        for (int m = 0; m < m_total; ++m) cfg.lambda[m] = lambda[m];
    } else {
        throw ConfigError(
            "deployment.lambda: must be a scalar or one value per cluster");
    }

    cfg.target_power = target_power;
    if (placement == "fixed") {
        cfg.placement = Placement::Fixed;
    } else if (placement == "uniform") {
        cfg.placement = Placement::UniformMargin;
    } else {
        throw ConfigError("target.placement: must be 'fixed' or 'uniform'");
    }
    cfg.target_position = Vec2{target_x, target_y};
    cfg.margin_side = margin_side;

    if (!(target_power >= 0)) {
        throw ConfigError("target.power: must be >= 0");
    }
    if (!(pfa > 0.0) || !(pfa < 1.0)) {
        throw ConfigError("sensing.pfa: must lie in (0, 1)");
    }
    if (!(eta > 0)) {
        throw ConfigError("sensing.eta: must be positive");
    }
    if (!(d0 > 0)) {
        throw ConfigError("sensing.d0: must be positive");
    }
    // SNR^s = P_t / sigma_s^2 in dB.
    const double sigma_s2 = target_power * std::pow(10.0, -snr_s_db / 10.0);
    if (!(sigma_s2 > 0)) {
        throw ConfigError(
            "sensing: target.power and sensing.snr_s_db give a nonpositive "
            "noise variance");
    }
    cfg.sensing.noise_std = std::sqrt(sigma_s2);
    cfg.sensing.saturation_distance = d0;
    cfg.sensing.exponent = eta;
    cfg.sensing.threshold = threshold_from_pfa(pfa, cfg.sensing.noise_std);

    if (alpha != 2.0 && alpha != 4.0) {
        throw ConfigError("channel.alpha: must be 2 or 4");
    }
    if (!(sigma_h2 > 0)) {
        throw ConfigError("channel.sigma_h2: must be positive");
    }
    if (!(r0 > 0)) {
        throw ConfigError("channel.r0: must be positive");
    }
    if (!(ptx > 0) || !(pm > 0)) {
        throw ConfigError("channel.ptx / channel.pm: must be positive");
    }
    cfg.channel.fading_scale_sq = sigma_h2;
    cfg.channel.scheme = scheme_from_name(scheme);
    cfg.channel.path_loss = alpha;
    cfg.channel.ref_distance = r0;
    cfg.channel.sn_power = ptx;
    cfg.channel.ch_power = ArrayXd::Constant(m_total, pm);
    // SNR_ch = P_tx / sigma_c^2, SNR_fc = P_m / sigma_f^2 (dB).
    cfg.channel.ch_noise_var =
        ArrayXd::Constant(m_total, ptx * std::pow(10.0, -snr_ch_db / 10.0));
    cfg.channel.fc_noise_var =
        ArrayXd::Constant(m_total, pm * std::pow(10.0, -snr_fc_db / 10.0));

    cfg.rule = rule_from_name(rule);
    if (trials < 1) {
        throw ConfigError("run.trials: must be >= 1");
    }
    if (trials > (1ll << 31)) {
        throw ConfigError("run.trials: too large");
    }
    cfg.trials = static_cast<int>(trials);
    cfg.master_seed = seed;
    if (!(quad_tol > 0)) {
        throw ConfigError("run.quad_tol: must be positive");
    }
    cfg.quad_tol = quad_tol;

    try {
        cfg.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    return cfg;
}

std::string RawConfig::to_text() const {
    std::ostringstream out;
    auto d = [](double v) { return format_double(v); };
    out << "[layout]\n";
    out << "side = " << d(side) << "\n";
    out << "grid_dim = " << grid_dim << "\n";
    out << "\n[deployment]\n";
    out << "lambda = ";
    for (std::size_t i = 0; i < lambda.size(); ++i) {
        if (i) out << ",";
        out << d(lambda[i]);
    }
    out << "\n";
    out << "\n[target]\n";
    out << "power = " << d(target_power) << "\n";
    out << "placement = " << placement << "\n";
    out << "x = " << d(target_x) << "\n";
    out << "y = " << d(target_y) << "\n";
    out << "margin_side = " << d(margin_side) << "\n";
    out << "\n[sensing]\n";
    out << "eta = " << d(eta) << "\n";
    out << "d0 = " << d(d0) << "\n";
    out << "snr_s_db = " << d(snr_s_db) << "\n";
    out << "pfa = " << d(pfa) << "\n";
    out << "\n[channel]\n";
    out << "scheme = " << scheme << "\n";
    out << "alpha = " << d(alpha) << "\n";
    out << "r0 = " << d(r0) << "\n";
    out << "sigma_h2 = " << d(sigma_h2) << "\n";
    out << "ptx = " << d(ptx) << "\n";
    out << "pm = " << d(pm) << "\n";
    out << "snr_ch_db = " << d(snr_ch_db) << "\n";
    out << "snr_fc_db = " << d(snr_fc_db) << "\n";
    out << "\n[fusion]\n";
    out << "rule = " << rule << "\n";
    out << "\n[run]\n";
    out << "trials = " << trials << "\n";
    out << "seed = " << seed << "\n";
    out << "quad_tol = " << d(quad_tol) << "\n";
    return out.str();
}

RawConfig parse_config(const std::string& text, const std::string& origin) {
    RawConfig cfg;

    using Setter = std::function<void(const std::string&, const std::string&)>;
    const std::map<std::string, Setter> setters = {
        {"layout.side", [&](const std::string& v, const std::string& w) { cfg.side = parse_double(v, w); }},
        {"layout.grid_dim", [&](const std::string& v, const std::string& w) { cfg.grid_dim = static_cast<int>(parse_int(v, w)); }},
        {"deployment.lambda", [&](const std::string& v, const std::string& w) { cfg.lambda = parse_double_list(v, w); }},
        {"target.power", [&](const std::string& v, const std::string& w) { cfg.target_power = parse_double(v, w); }},
        {"target.placement", [&](const std::string& v, const std::string&) { cfg.placement = v; }},
        {"target.x", [&](const std::string& v, const std::string& w) { cfg.target_x = parse_double(v, w); }},
        {"target.y", [&](const std::string& v, const std::string& w) { cfg.target_y = parse_double(v, w); }},
        {"target.margin_side", [&](const std::string& v, const std::string& w) { cfg.margin_side = parse_double(v, w); }},
        {"sensing.eta", [&](const std::string& v, const std::string& w) { cfg.eta = parse_double(v, w); }},
        {"sensing.d0", [&](const std::string& v, const std::string& w) { cfg.d0 = parse_double(v, w); }},
        {"sensing.snr_s_db", [&](const std::string& v, const std::string& w) { cfg.snr_s_db = parse_double(v, w); }},
        {"sensing.pfa", [&](const std::string& v, const std::string& w) { cfg.pfa = parse_double(v, w); }},
        {"channel.scheme", [&](const std::string& v, const std::string&) { cfg.scheme = v; }},
        {"channel.alpha", [&](const std::string& v, const std::string& w) { cfg.alpha = parse_double(v, w); }},
        {"channel.r0", [&](const std::string& v, const std::string& w) { cfg.r0 = parse_double(v, w); }},
        {"channel.sigma_h2", [&](const std::string& v, const std::string& w) { cfg.sigma_h2 = parse_double(v, w); }},
        {"channel.ptx", [&](const std::string& v, const std::string& w) { cfg.ptx = parse_double(v, w); }},
        {"channel.pm", [&](const std::string& v, const std::string& w) { cfg.pm = parse_double(v, w); }},
        {"channel.snr_ch_db", [&](const std::string& v, const std::string& w) { cfg.snr_ch_db = parse_double(v, w); }},
        {"channel.snr_fc_db", [&](const std::string& v, const std::string& w) { cfg.snr_fc_db = parse_double(v, w); }},
        {"fusion.rule", [&](const std::string& v, const std::string&) { cfg.rule = v; }},
        {"run.trials", [&](const std::string& v, const std::string& w) { cfg.trials = parse_int(v, w); }},
        {"run.seed", [&](const std::string& v, const std::string& w) { cfg.seed = parse_u64(v, w); }},
        {"run.quad_tol", [&](const std::string& v, const std::string& w) { cfg.quad_tol = parse_double(v, w); }},
    };

    std::istringstream in(text);
    std::string line;
    std::string section;
    int line_no = 0;
    std::map<std::string, int> seen;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string where = origin + ":" + std::to_string(line_no);
        std::string s = line;
        const auto hash = s.find('#');
        if (hash != std::string::npos) s.erase(hash);
        s = trim(s);
        if (s.empty()) continue;
        if (s.front() == '[') {
            if (s.back() != ']') {
                throw ConfigError(where + ": malformed section header");
            }
            section = trim(s.substr(1, s.size() - 2));
            continue;
        }
        const auto eq = s.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(where + ": expected 'key = value'");
        }
        const std::string key = trim(s.substr(0, eq));
        const std::string value = trim(s.substr(eq + 1));
        if (section.empty()) {
            throw ConfigError(where + ": key '" + key + "' outside any section");
        }
        const std::string full = section + "." + key;
        const auto it = setters.find(full);
        if (it == setters.end()) {
            throw ConfigError(where + ": unknown key '" + full + "'");
        }
        if (++seen[full] > 1) {
            throw ConfigError(where + ": duplicate key '" + full + "'");
        }
        it->second(value, where);
    }
    return cfg;
}

RawConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open config file: " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), path);
}

}  // namespace clusterdd
