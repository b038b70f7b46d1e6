#pragma once

#include <span>
#include <vector>

#include "clusterdd/geometry.hpp"
#include "clusterdd/rng.hpp"
#include "clusterdd/types.hpp"

namespace clusterdd {

/// Node-side transmit combining: full complex gain pre-compensation (dMRTC)
/// or phase-only pre-compensation (dEGTC).
enum class Scheme { dMRTC, dEGTC };

const char* scheme_name(Scheme scheme);

/// Channel parameters for the node->CH shared links and the CH->FC dedicated
/// links. Per-cluster arrays are indexed like the layout's clusters.
struct ChannelConfig {
    Scalar fading_scale_sq = 1.0;  // sigma_H^2, shared across clusters
    Scheme scheme = Scheme::dEGTC;
    Scalar path_loss = 2.0;    // alpha in {2, 4}
    Scalar ref_distance = 1.0; // r_0, inverse-power law clamped inside it
    Scalar sn_power = 1.0;     // P_tx, common to all nodes
    ArrayXd ch_power;          // P_m
    ArrayXd ch_noise_var;      // sigma_{c,m}^2
    ArrayXd fc_noise_var;      // sigma_{f,m}^2

    // Aggregate single-hop form of the two-hop relay: equivalent power,
    // noise variance and SNR seen by the fusion center per cluster.
    Scalar aggregate_power(int m) const { return sn_power * ch_power[m]; }
    Scalar aggregate_noise_var(int m) const {
        return ch_power[m] * ch_noise_var[m] + fc_noise_var[m];
    }
    Scalar equivalent_snr(int m) const {
        return aggregate_power(m) / aggregate_noise_var(m);
    }
    Scalar snr_ch(int m) const { return sn_power / ch_noise_var[m]; }
    Scalar snr_fc(int m) const { return ch_power[m] / fc_noise_var[m]; }

    /// Throws std::invalid_argument naming the violated constraint.
    void validate(int clusters) const;
};

/// One flat-fading draw: Rayleigh magnitude, uniform phase on [0, 2pi).
struct FadingDraw {
    Scalar magnitude = 0;
    Scalar phase = 0;
};

FadingDraw draw_fading(Rng& rng, Scalar fading_scale_sq);

/// Effective nonnegative gain after transmit combining: |H|^2 under dMRTC,
/// |H| under dEGTC. Phase cancels by construction either way.
Scalar combine_gain(const FadingDraw& h, Scheme scheme);

/// Propagation attenuation max(r_0, d)^(-alpha/2).
Scalar path_gain(Scalar distance, Scalar ref_distance, Scalar path_loss);

/// Coherent sum of the detecting nodes' combined gains weighted by path
/// gain; one gain entry per detecting node, in point order.
Scalar mac_sum(const PointMatrix& points, const DecisionArray& decisions,
               const Vec2& ch, Scalar ref_distance, Scalar path_loss,
               std::span<const Scalar> combine_gains);

struct MacOutput {
    Scalar y = 0;     // CH observation, noise included
    Scalar ybar = 0;  // noiseless random sum
};

/// Shared-channel superposition at cluster m's CH: fresh i.i.d. fading per
/// detecting node, then AWGN. Y = sqrt(P_tx) * Ybar + W.
MacOutput mac_receive(const PointSample& points,
                      const std::vector<DecisionArray>& decisions, int m,
                      const ClusterLayout& layout, const ChannelConfig& cfg,
                      Rng& rng);

/// Dedicated relay hop to the fusion center: Z = sqrt(P_m) * Y + V.
Scalar ch_to_fc(Scalar y_m, int m, const ChannelConfig& cfg, Rng& rng);

}  // namespace clusterdd
