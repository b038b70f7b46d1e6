#include "clusterdd/sensing.hpp"

#include <cmath>
#include <stdexcept>

#include "clusterdd/normal.hpp"

namespace clusterdd {

Scalar amplitude(const Vec2& x, const TargetParams& target,
                 const SensingConfig& cfg) {
    const Scalar d = (target.position - x).norm();
    const Scalar reach = std::max(cfg.saturation_distance, d);
    return std::sqrt(target.power) / std::pow(reach, 0.5 * cfg.exponent);
}

Scalar threshold_from_pfa(Scalar pfa, Scalar noise_std) {
    if (!(pfa > 0.0) || !(pfa < 1.0)) {
        throw std::domain_error(
            "threshold_from_pfa: false-alarm rate must lie in (0, 1)");
    }
    return noise_std * qfunc_inv(pfa);
}

Scalar local_pfa(Scalar threshold, Scalar noise_std) {
    return qfunc(threshold / noise_std);
}

Scalar local_pd(const Vec2& x, const TargetParams& target,
                const SensingConfig& cfg) {
    return qfunc((cfg.threshold - amplitude(x, target, cfg)) / cfg.noise_std);
}

std::vector<DecisionArray> simulate_decisions(const PointSample& points,
                                              Hypothesis hypothesis,
                                              const TargetParams& target,
                                              const SensingConfig& cfg,
                                              Rng& rng) {
    std::vector<DecisionArray> decisions(points.clusters.size());
    for (std::size_t m = 0; m < points.clusters.size(); ++m) {
        const PointMatrix& pts = points.clusters[m];
        DecisionArray& dec = decisions[m];
        dec.resize(pts.rows());
        for (Index i = 0; i < pts.rows(); ++i) {
            Scalar sample = cfg.noise_std * rng.normal();
            if (hypothesis == Hypothesis::H1) {
                sample += amplitude(pts.row(i).transpose(), target, cfg);
            }
            dec[i] = sample > cfg.threshold ? 1 : 0;
        }
    }
    return decisions;
}

}  // namespace clusterdd
