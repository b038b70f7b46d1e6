#include "clusterdd/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace clusterdd {

namespace {
constexpr double kTwoPi = 6.283185307179586476925;
}

const char* scheme_name(Scheme scheme) {
    return scheme == Scheme::dMRTC ? "dMRTC" : "dEGTC";
}

void ChannelConfig::validate(int clusters) const {
    if (!(fading_scale_sq > 0)) {
        throw std::invalid_argument("channel: fading scale must be positive");
    }
    if (path_loss != 2.0 && path_loss != 4.0) {
        throw std::invalid_argument("channel: path-loss exponent must be 2 or 4");
    }
    if (!(ref_distance > 0)) {
        throw std::invalid_argument("channel: reference distance must be positive");
    }
    if (!(sn_power > 0)) {
        throw std::invalid_argument("channel: node transmit power must be positive");
    }
    if (ch_power.size() != clusters || ch_noise_var.size() != clusters ||
        fc_noise_var.size() != clusters) {
        throw std::invalid_argument(
            "channel: per-cluster arrays must match the cluster count");
    }
    for (int m = 0; m < clusters; ++m) {
        if (!(ch_power[m] > 0) || !(ch_noise_var[m] > 0) || !(fc_noise_var[m] > 0)) {
            throw std::invalid_argument(
                "channel: CH powers and noise variances must be positive");
        }
    }
}

FadingDraw draw_fading(Rng& rng, Scalar fading_scale_sq) {
    if (!(fading_scale_sq > 0)) {
        throw std::domain_error("draw_fading: fading scale must be positive");
    }
    FadingDraw h;
    h.magnitude = rng.rayleigh(std::sqrt(fading_scale_sq));
    h.phase = rng.uniform(0.0, kTwoPi);
    return h;
}

Scalar combine_gain(const FadingDraw& h, Scheme scheme) {
    return scheme == Scheme::dMRTC ? h.magnitude * h.magnitude : h.magnitude;
}

Scalar path_gain(Scalar distance, Scalar ref_distance, Scalar path_loss) {
    const Scalar d = std::max(ref_distance, distance);
    // alpha/2 is 1 or 2 for the supported exponents; avoid pow.
    if (path_loss == 2.0) return 1.0 / d;
    if (path_loss == 4.0) return 1.0 / (d * d);
    return std::pow(d, -0.5 * path_loss);
}

Scalar mac_sum(const PointMatrix& points, const DecisionArray& decisions,
               const Vec2& ch, Scalar ref_distance, Scalar path_loss,
               std::span<const Scalar> combine_gains) {
    if (decisions.size() != points.rows()) {
        throw std::invalid_argument("mac_sum: decisions misaligned with points");
    }
    Scalar sum = 0;
    std::size_t g = 0;
    for (Index i = 0; i < points.rows(); ++i) {
        if (!decisions[i]) continue;
        if (g >= combine_gains.size()) {
            throw std::invalid_argument("mac_sum: fewer gains than detecting nodes");
        }
        const Scalar dx = points(i, 0) - ch.x();
        const Scalar dy = points(i, 1) - ch.y();
        const Scalar d = std::sqrt(dx * dx + dy * dy);
        sum += combine_gains[g++] * path_gain(d, ref_distance, path_loss);
    }
    return sum;
}

MacOutput mac_receive(const PointSample& points,
                      const std::vector<DecisionArray>& decisions, int m,
                      const ClusterLayout& layout, const ChannelConfig& cfg,
                      Rng& rng) {
    const PointMatrix& pts = points.clusters.at(m);
    const DecisionArray& dec = decisions.at(m);
    if (dec.size() != pts.rows()) {
        throw std::invalid_argument("mac_receive: decisions misaligned with points");
    }
    const Vec2 ch = layout.ch_positions.row(m).transpose();
    Scalar ybar = 0;
    for (Index i = 0; i < pts.rows(); ++i) {
        if (!dec[i]) continue;  // OOK: silent nodes contribute nothing
        const FadingDraw h = draw_fading(rng, cfg.fading_scale_sq);
        const Scalar dx = pts(i, 0) - ch.x();
        const Scalar dy = pts(i, 1) - ch.y();
        const Scalar d = std::sqrt(dx * dx + dy * dy);
        ybar += combine_gain(h, cfg.scheme) *
                path_gain(d, cfg.ref_distance, cfg.path_loss);
    }
    MacOutput out;
    out.ybar = ybar;
    const Scalar noise_sd = std::sqrt(cfg.ch_noise_var[m]);
    out.y = std::sqrt(cfg.sn_power) * ybar + noise_sd * rng.normal();
    return out;
}

Scalar ch_to_fc(Scalar y_m, int m, const ChannelConfig& cfg, Rng& rng) {
    const Scalar noise_sd = std::sqrt(cfg.fc_noise_var[m]);
    return std::sqrt(cfg.ch_power[m]) * y_m + noise_sd * rng.normal();
}

}  // namespace clusterdd
