#pragma once

#include "clusterdd/analytic.hpp"
#include "clusterdd/types.hpp"

namespace clusterdd {

enum class FitFamily { Gaussian, Lognormal };

/// Per-cluster quadratic-form coefficients of a moment-matched fusion
/// statistic: sum_m a[m] * (t(z_m) + d[m])^2 with t the identity (Gaussian
/// fit) or ln|.| (lognormal fit).
struct FusionWeights {
    FitFamily family = FitFamily::Gaussian;
    ArrayXd a;
    ArrayXd d;

    Index clusters() const { return a.size(); }
};

/// Completed-square weights of the Gaussian-fit likelihood ratio:
///   a_m = 1/(2 var0) - 1/(2 var1),
///   d_m = (mu1 var0 - mu0 var1) / (var1 - var0).
/// Throws std::domain_error naming the first cluster whose hypothesis
/// variances coincide (the quadratic term would vanish).
FusionWeights build_gaussian_weights(const MomentSummary& moments);

/// Same construction in the log domain using the lognormal fit parameters.
/// Requires positive observation means (valid lognormal fit) and distinct
/// log-domain variances per cluster.
FusionWeights build_lognormal_weights(const MomentSummary& moments);

/// Weighted quadratic statistic sum_m a_m (z_m + d_m)^2; larger favors H1.
double mor_gaussian(const Eigen::Ref<const VectorXd>& z,
                    const FusionWeights& weights);

/// Log-domain counterpart sum_m a_m (ln|z_m| + d_m)^2. The modulus guards
/// negative observations; |z| is floored at 1e-300 before the log.
double mor_lognormal(const Eigen::Ref<const VectorXd>& z,
                     const FusionWeights& weights);

/// Equal-gain statistics needing no target knowledge.
double mer_gaussian(const Eigen::Ref<const VectorXd>& z);
double mer_lognormal(const Eigen::Ref<const VectorXd>& z);

/// Log-likelihood ratio of the fitted family evaluated exactly (constants
/// kept). The completed-square statistics above differ from this by an
/// additive constant in z; that identity is the correctness oracle for the
/// weight construction.
double exact_fitted_llr(const Eigen::Ref<const VectorXd>& z,
                        const MomentSummary& moments, FitFamily family);

}  // namespace clusterdd
