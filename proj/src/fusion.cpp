#include "clusterdd/fusion.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace clusterdd {

namespace {

constexpr double kLogFloor = 1e-300;

double safe_log_abs(double z) {
    return std::log(std::max(std::abs(z), kLogFloor));
}

// Completing the square on a_m t^2 + b_m t with
//   a_m = 1/(2 v0) - 1/(2 v1),  b_m = mu1/v1 - mu0/v0
// gives d_m = b_m / (2 a_m) = (mu1 v0 - mu0 v1) / (v1 - v0).
FusionWeights build_weights(FitFamily family, const ArrayX2d& mean,
                            const ArrayX2d& var, const char* what) {
    const Index m_total = mean.rows();
    FusionWeights w;
    w.family = family;
    w.a.resize(m_total);
    w.d.resize(m_total);
    for (Index m = 0; m < m_total; ++m) {
        const double v0 = var(m, 0);
        const double v1 = var(m, 1);
        if (v0 == v1) {
            throw std::domain_error(std::string(what) +
                                    ": cluster " + std::to_string(m) +
                                    " has equal variances under both hypotheses");
        }
        w.a[m] = 0.5 / v0 - 0.5 / v1;
        w.d[m] = (mean(m, 1) * v0 - mean(m, 0) * v1) / (v1 - v0);
    }
    return w;
}

void check_dimensions(Index z_size, Index clusters, const char* what) {
    if (z_size != clusters) {
        throw std::invalid_argument(std::string(what) +
                                    ": observation length does not match the "
                                    "number of clusters");
    }
}

}  // namespace

FusionWeights build_gaussian_weights(const MomentSummary& moments) {
    return build_weights(FitFamily::Gaussian, moments.z_mean, moments.z_var,
                         "build_gaussian_weights");
}

FusionWeights build_lognormal_weights(const MomentSummary& moments) {
    for (Index m = 0; m < moments.clusters(); ++m) {
        if (!(moments.z_mean(m, 0) > 0) || !(moments.z_mean(m, 1) > 0)) {
            throw std::domain_error(
                "build_lognormal_weights: lognormal fit requires positive "
                "observation means (cluster " + std::to_string(m) + ")");
        }
    }
    return build_weights(FitFamily::Lognormal, moments.log_mean, moments.log_var,
                         "build_lognormal_weights");
}

double mor_gaussian(const Eigen::Ref<const VectorXd>& z,
                    const FusionWeights& weights) {
    if (weights.family != FitFamily::Gaussian) {
        throw std::invalid_argument("mor_gaussian: weights built for another family");
    }
    check_dimensions(z.size(), weights.clusters(), "mor_gaussian");
    double stat = 0;
    for (Index m = 0; m < z.size(); ++m) {
        const double u = z[m] + weights.d[m];
        stat += weights.a[m] * u * u;
    }
    return stat;
}

double mor_lognormal(const Eigen::Ref<const VectorXd>& z,
                     const FusionWeights& weights) {
    if (weights.family != FitFamily::Lognormal) {
        throw std::invalid_argument("mor_lognormal: weights built for another family");
    }
    check_dimensions(z.size(), weights.clusters(), "mor_lognormal");
    double stat = 0;
    for (Index m = 0; m < z.size(); ++m) {
        const double u = safe_log_abs(z[m]) + weights.d[m];
        stat += weights.a[m] * u * u;
    }
    return stat;
}

double mer_gaussian(const Eigen::Ref<const VectorXd>& z) {
    return z.squaredNorm();
}

double mer_lognormal(const Eigen::Ref<const VectorXd>& z) {
    double stat = 0;
    for (Index m = 0; m < z.size(); ++m) {
        const double l = safe_log_abs(z[m]);
        stat += l * l;
    }
    return stat;
}

double exact_fitted_llr(const Eigen::Ref<const VectorXd>& z,
                        const MomentSummary& moments, FitFamily family) {
    check_dimensions(z.size(), moments.clusters(), "exact_fitted_llr");
    double llr = 0;
    if (family == FitFamily::Gaussian) {
        for (Index m = 0; m < z.size(); ++m) {
            const double v0 = moments.z_var(m, 0);
            const double v1 = moments.z_var(m, 1);
            const double r0 = z[m] - moments.z_mean(m, 0);
            const double r1 = z[m] - moments.z_mean(m, 1);
            llr += 0.5 * std::log(v0 / v1) + r0 * r0 / (2.0 * v0) -
                   r1 * r1 / (2.0 * v1);
        }
    } else {
        for (Index m = 0; m < z.size(); ++m) {
            if (!(moments.z_mean(m, 0) > 0) || !(moments.z_mean(m, 1) > 0)) {
                throw std::domain_error(
                    "exact_fitted_llr: lognormal fit requires positive means");
            }
            const double v0 = moments.log_var(m, 0);
            const double v1 = moments.log_var(m, 1);
            const double l = safe_log_abs(z[m]);
            const double r0 = l - moments.log_mean(m, 0);
            const double r1 = l - moments.log_mean(m, 1);
            // The 1/|z| factors of the two densities cancel in the ratio.
            llr += 0.5 * std::log(v0 / v1) + r0 * r0 / (2.0 * v0) -
                   r1 * r1 / (2.0 * v1);
        }
    }
    return llr;
}

}  // namespace clusterdd
