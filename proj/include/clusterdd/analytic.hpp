#pragma once

#include <functional>

#include "clusterdd/channel.hpp"
#include "clusterdd/geometry.hpp"
#include "clusterdd/quadrature.hpp"
#include "clusterdd/sensing.hpp"
#include "clusterdd/types.hpp"

namespace clusterdd {

/// First and second raw moments of the combined fading gain f(H).
/// Closed forms of the Rayleigh magnitude: under dEGTC (f = |H|)
/// m1 = sigma_H sqrt(pi/2), m2 = 2 sigma_H^2; under dMRTC (f = |H|^2)
/// m1 = 2 sigma_H^2, m2 = 8 sigma_H^4.
struct CombinerMoments {
    double m1 = 0;
    double m2 = 0;
};

CombinerMoments combiner_moments(Scheme scheme, double fading_scale_sq);

/// Transmit-combining gain m1^2 / m2: exactly 1/2 for dMRTC and pi/4 for
/// dEGTC, independent of the fading scale.
double combining_gain(Scheme scheme);

/// Cell integrals of the clamped propagation kernel against the local
/// detection field. The mean integrals use exponent alpha/2, the variance
/// integrals exponent alpha; index 0/1 selects the hypothesis.
struct ClusterIntegrals {
    double i_mu0 = 0;
    double i_mu1 = 0;
    double i_sig0 = 0;
    double i_sig1 = 0;
};

/// Retention probabilities of the local detector: a constant under H0 and a
/// location-dependent field under H1. A null field means "same as pfa".
struct ThinningField {
    double pfa = 0;
    std::function<double(const Vec2&)> pd;
};

/// 2-D adaptive quadrature of the four kernel integrals over a square cell.
/// The kernel is max(r_0, ||x - ch||)^(-p); clamping keeps every integral
/// finite for both supported exponents.
ClusterIntegrals cluster_integrals(const Rect& cell, const Vec2& ch,
                                   double path_loss, double ref_distance,
                                   const ThinningField& thinning,
                                   double rel_tol = 1e-8);

/// Same integrals over an annulus r_0 <= r <= R centred on the CH with a
/// constant retention probability; evaluated in polar coordinates where the
/// integrand is smooth.
ClusterIntegrals annulus_integrals(double ref_distance, double outer_radius,
                                   double path_loss, double pfa,
                                   double rel_tol = 1e-8);

/// Mean and variance of the noiseless CH signal per hypothesis:
/// mean_j = lambda * m1 * I_mu_j, var_j = lambda * m2 * I_sig_j.
struct YbarMoments {
    Eigen::Vector2d mean = Eigen::Vector2d::Zero();  // index = hypothesis
    Eigen::Vector2d var = Eigen::Vector2d::Zero();
};

YbarMoments ybar_moments(double lambda, const CombinerMoments& cm,
                         const ClusterIntegrals& ints);

/// Fusion-center observation moments through the two-hop relay:
/// mean = sqrt(P_tx P_m) * mean_ybar,
/// var = P_tx P_m * var_ybar + P_m sigma_c^2 + sigma_f^2.
struct FcMoments {
    Eigen::Vector2d mean = Eigen::Vector2d::Zero();
    Eigen::Vector2d var = Eigen::Vector2d::Zero();
};

FcMoments fc_moments(const YbarMoments& ybar, double sn_power, double ch_power,
                     double ch_noise_var, double fc_noise_var);

/// Log-domain parameters of the lognormal with the given mean and variance:
/// log_mean = ln(mu^2 / sqrt(var + mu^2)), log_var = ln(1 + var / mu^2).
/// Throws std::domain_error for non-positive mean.
struct LognormalParams {
    double log_mean = 0;
    double log_var = 0;
};

LognormalParams lognormal_match(double mean, double var);

/// Full per-cluster, per-hypothesis second-order characterization used by the
/// fusion rules: noiseless CH moments, FC observation moments, and the
/// lognormal fit of the latter. Column j of each array is hypothesis j.
struct MomentSummary {
    ArrayX2d ybar_mean, ybar_var;
    ArrayX2d z_mean, z_var;
    ArrayX2d log_mean, log_var;

    Index clusters() const { return ybar_mean.rows(); }
};

MomentSummary moment_summary(const ClusterLayout& layout, const ArrayXd& lambda,
                             const TargetParams& target,
                             const SensingConfig& sensing,
                             const ChannelConfig& channel,
                             double rel_tol = 1e-8);

/// Variant reusing precomputed per-cluster integrals (e.g. when only the
/// target moved and the H0 integrals are unchanged).
MomentSummary moment_summary(const std::vector<ClusterIntegrals>& ints,
                             const ArrayXd& lambda, const ChannelConfig& channel);

/// Fixed-rule companion to cluster_integrals for target sweeps: the kernel
/// factors are tabulated once per cluster on tensor Gauss-Legendre nodes, so
/// a new target costs only one detection-field evaluation per node. Both
/// hypothesis rows use the same rule, keeping their differences coherent.
/// Accuracy is a few 1e-4 relative at the default order -- far below the
/// Monte-Carlo resolution of the studies this backs.
class FieldIntegralTable {
public:
    FieldIntegralTable(const ClusterLayout& layout, double path_loss,
                       double ref_distance, int order = 24);

    std::vector<ClusterIntegrals> integrals(
        double pfa, const std::function<double(const Vec2&)>& pd) const;

    Index clusters() const { return static_cast<Index>(nodes_.size()); }

private:
    std::vector<PointMatrix> nodes_;   // per cluster, order^2 x 2
    std::vector<ArrayXd> kernel_mu_;   // quadrature weight * kernel, per node
    std::vector<ArrayXd> kernel_sig_;
};

/// Separation proxy lambda * g_tc * (I_mu1 - I_mu0)^2 / I_sig1.
/// Throws std::domain_error when the variance integral vanishes.
double deflection(double lambda, Scheme scheme, const ClusterIntegrals& ints);

/// Gaussian-approximated single-cluster operating point: the threshold
/// achieving the requested global false-alarm rate and the corresponding
/// detection probability
///   Gamma = sigma0 * Qinv(P_FA) + mu0,
///   P_D = Q((mu0 - mu1 + sigma0 * Qinv(P_FA)) / sigma1).
struct SingleClusterPerf {
    double threshold = 0;
    double pd = 0;
};

SingleClusterPerf single_cluster_performance(double pfa_target, double mu0,
                                             double sigma0, double mu1,
                                             double sigma1);

/// Average received power at a CH under H0,
/// P = P_tx * (mean_ybar^2 + var_ybar) = P_tx (lambda^2 m1^2 I_mu0^2 + lambda m2 I_sig0).
double avg_received_power(double lambda, double sn_power,
                          const CombinerMoments& cm, const ClusterIntegrals& ints);

/// Closed-form H0 received power for an annular cluster (outer radius R,
/// inner radius r_0), with K1 = 2 pi pfa m2 and K2 = 4 pi^2 pfa^2 m1^2:
///   alpha = 2: lambda P_tx (K1 ln(R/r0) + lambda K2 (R - r0)^2)
///   alpha = 4: lambda P_tx (K1/2 (R^2 - r0^2)/(R^2 r0^2) + lambda K2 ln^2(R/r0))
/// Throws std::domain_error unless R > r0.
double power_circular_exact(double outer_radius, double ref_distance,
                            double lambda, double sn_power, double path_loss,
                            double pfa, const CombinerMoments& cm);

/// Large-R limit of the exact form (r0 terms dropped):
///   alpha = 2: P_tx (lambda K1 ln R + lambda^2 K2 R^2)
///   alpha = 4: P_tx (lambda K1 / (2 r0^2) + lambda^2 K2 ln^2 R)
double power_circular_approx(double outer_radius, double ref_distance,
                             double lambda, double sn_power, double path_loss,
                             double pfa, const CombinerMoments& cm);

/// Node transmit power achieving a requested CH-side SNR under the
/// approximate power law; exact algebraic inverse of power_circular_approx
/// at P_tx = 1 scaling.
double ptx_for_target_snr(double snr_ch, double ch_noise_var, double lambda,
                          double outer_radius, double ref_distance,
                          double path_loss, double pfa,
                          const CombinerMoments& cm);

}  // namespace clusterdd
