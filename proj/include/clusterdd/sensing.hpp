#pragma once

#include <vector>

#include "clusterdd/geometry.hpp"
#include "clusterdd/rng.hpp"
#include "clusterdd/types.hpp"

namespace clusterdd {

/// Intruder signature: emitted power and position.
struct TargetParams {
    Scalar power = 0;
    Vec2 position = Vec2::Zero();
};

/// Local detector parameters shared by all nodes.
struct SensingConfig {
    Scalar noise_std = 1.0;            // sigma_s
    Scalar saturation_distance = 1.0;  // d_0
    Scalar exponent = 2.0;             // signature power decay; 2 = inverse square
    Scalar threshold = 0.0;            // tau
};

/// Noise-free signature amplitude seen at x:
/// sqrt(P_t) / max(d_0, ||x_t - x||)^(exponent/2). Saturates inside d_0.
Scalar amplitude(const Vec2& x, const TargetParams& target,
                 const SensingConfig& cfg);

/// Threshold achieving a requested per-node false-alarm rate for the scalar
/// matched filter: tau = sigma_s * Qinv(pfa). Throws for pfa outside (0, 1).
Scalar threshold_from_pfa(Scalar pfa, Scalar noise_std);

/// Per-node false-alarm probability Q(tau / sigma_s).
Scalar local_pfa(Scalar threshold, Scalar noise_std);

/// Per-node detection probability Q((tau - a(x)) / sigma_s). Reduces to
/// local_pfa when the amplitude vanishes.
Scalar local_pd(const Vec2& x, const TargetParams& target,
                const SensingConfig& cfg);

/// Draws one noisy sample per node and thresholds it. Under H0 the sample is
/// pure noise; under H1 the local signature amplitude is added. Decision is 1
/// iff the sample strictly exceeds the threshold.
std::vector<DecisionArray> simulate_decisions(const PointSample& points,
                                              Hypothesis hypothesis,
                                              const TargetParams& target,
                                              const SensingConfig& cfg,
                                              Rng& rng);

}  // namespace clusterdd
