#include "clusterdd/analytic.hpp"

#include <cmath>
#include <stdexcept>

#include "clusterdd/normal.hpp"

namespace clusterdd {

namespace {

constexpr double kPi = 3.14159265358979323846;

double clamped_kernel(double r, double ref_distance, double exponent) {
    const double d = std::max(ref_distance, r);
    if (exponent == 1.0) return 1.0 / d;
    if (exponent == 2.0) return 1.0 / (d * d);
    if (exponent == 4.0) {
        const double d2 = d * d;
        return 1.0 / (d2 * d2);
    }
    return std::pow(d, -exponent);
}

double cell_kernel_integral(const Rect& cell, const Vec2& ch, double exponent,
                            double ref_distance,
                            const std::function<double(const Vec2&)>& retention,
                            double rel_tol) {
    auto f = [&](double x, double y) {
        const double dx = x - ch.x();
        const double dy = y - ch.y();
        const double r = std::sqrt(dx * dx + dy * dy);
        return clamped_kernel(r, ref_distance, exponent) * retention(Vec2{x, y});
    };
    return integrate_rect(f, cell, rel_tol).value;
}

double annulus_kernel_integral(double r0, double outer, double exponent,
                               double pfa, double rel_tol) {
    // Polar coordinates: the kernel is smooth on [r0, R], Jacobian r.
    auto f = [&](double r, double /*theta*/) {
        return clamped_kernel(r, r0, exponent) * pfa * r;
    };
    return integrate_rect(f, Rect{r0, 0.0, outer, 2.0 * kPi}, rel_tol).value;
}

struct PowerLawTerms {
    double linear;     // multiplies lambda
    double quadratic;  // multiplies lambda^2
};

// Shared by the exact/approximate corollary forms and their inverse.
PowerLawTerms circular_power_terms(double outer, double r0, double path_loss,
                                   double pfa, const CombinerMoments& cm,
                                   bool approximate) {
    const double k1 = 2.0 * kPi * pfa * cm.m2;
    const double k2 = 4.0 * kPi * kPi * pfa * pfa * cm.m1 * cm.m1;
    PowerLawTerms t{};
    if (path_loss == 2.0) {
        if (approximate) {
            t.linear = k1 * std::log(outer);
            t.quadratic = k2 * outer * outer;
        } else {
            t.linear = k1 * std::log(outer / r0);
            t.quadratic = k2 * (outer - r0) * (outer - r0);
        }
    } else if (path_loss == 4.0) {
        if (approximate) {
            const double lr = std::log(outer);
            t.linear = 0.5 * k1 / (r0 * r0);
            t.quadratic = k2 * lr * lr;
        } else {
            const double lr = std::log(outer / r0);
            t.linear = 0.5 * k1 * (outer * outer - r0 * r0) /
                       (outer * outer * r0 * r0);
            t.quadratic = k2 * lr * lr;
        }
    } else {
        throw std::domain_error("circular power law: path loss must be 2 or 4");
    }
    return t;
}

}  // namespace

CombinerMoments combiner_moments(Scheme scheme, double fading_scale_sq) {
    if (!(fading_scale_sq > 0)) {
        throw std::domain_error("combiner_moments: fading scale must be positive");
    }
    CombinerMoments cm;
    if (scheme == Scheme::dEGTC) {
        cm.m1 = std::sqrt(fading_scale_sq) * std::sqrt(kPi / 2.0);
        cm.m2 = 2.0 * fading_scale_sq;
    } else {
        cm.m1 = 2.0 * fading_scale_sq;
        cm.m2 = 8.0 * fading_scale_sq * fading_scale_sq;
    }
    return cm;
}

double combining_gain(Scheme scheme) {
    return scheme == Scheme::dMRTC ? 0.5 : kPi / 4.0;
}

ClusterIntegrals cluster_integrals(const Rect& cell, const Vec2& ch,
                                   double path_loss, double ref_distance,
                                   const ThinningField& thinning,
                                   double rel_tol) {
    if (!(rel_tol > 0)) {
        throw std::invalid_argument("cluster_integrals: tolerance must be positive");
    }
    auto constant = [&](const Vec2&) { return thinning.pfa; };
    std::function<double(const Vec2&)> h0 = constant;
    std::function<double(const Vec2&)> h1 = thinning.pd ? thinning.pd : constant;

    ClusterIntegrals ints;
    if (thinning.pfa == 0.0 && !thinning.pd) {
        return ints;  // zero integrand everywhere
    }
    const double mu_exp = 0.5 * path_loss;
    ints.i_mu0 = thinning.pfa == 0.0
                     ? 0.0
                     : cell_kernel_integral(cell, ch, mu_exp, ref_distance, h0, rel_tol);
    ints.i_sig0 = thinning.pfa == 0.0
                      ? 0.0
                      : cell_kernel_integral(cell, ch, path_loss, ref_distance, h0, rel_tol);
    if (thinning.pd) {
        ints.i_mu1 = cell_kernel_integral(cell, ch, mu_exp, ref_distance, h1, rel_tol);
        ints.i_sig1 = cell_kernel_integral(cell, ch, path_loss, ref_distance, h1, rel_tol);
    } else {
        ints.i_mu1 = ints.i_mu0;
        ints.i_sig1 = ints.i_sig0;
    }
    return ints;
}

ClusterIntegrals annulus_integrals(double ref_distance, double outer_radius,
                                   double path_loss, double pfa, double rel_tol) {
    if (!(outer_radius > ref_distance)) {
        throw std::domain_error("annulus_integrals: outer radius must exceed r0");
    }
    ClusterIntegrals ints;
    if (pfa == 0.0) return ints;
    ints.i_mu0 =
        annulus_kernel_integral(ref_distance, outer_radius, 0.5 * path_loss, pfa, rel_tol);
    ints.i_sig0 =
        annulus_kernel_integral(ref_distance, outer_radius, path_loss, pfa, rel_tol);
    ints.i_mu1 = ints.i_mu0;
    ints.i_sig1 = ints.i_sig0;
    return ints;
}

YbarMoments ybar_moments(double lambda, const CombinerMoments& cm,
                         const ClusterIntegrals& ints) {
    YbarMoments m;
    m.mean[0] = lambda * cm.m1 * ints.i_mu0;
    m.mean[1] = lambda * cm.m1 * ints.i_mu1;
    m.var[0] = lambda * cm.m2 * ints.i_sig0;
    m.var[1] = lambda * cm.m2 * ints.i_sig1;
    return m;
}

FcMoments fc_moments(const YbarMoments& ybar, double sn_power, double ch_power,
                     double ch_noise_var, double fc_noise_var) {
    const double p_agg = sn_power * ch_power;
    const double noise = ch_power * ch_noise_var + fc_noise_var;
    FcMoments m;
    m.mean = std::sqrt(p_agg) * ybar.mean;
    m.var = p_agg * ybar.var + Eigen::Vector2d::Constant(noise);
    return m;
}

LognormalParams lognormal_match(double mean, double var) {
    if (!(mean > 0)) {
        throw std::domain_error("lognormal_match: mean must be positive");
    }
    if (!(var >= 0)) {
        throw std::domain_error("lognormal_match: variance must be nonnegative");
    }
    LognormalParams p;
    p.log_mean = std::log(mean * mean / std::sqrt(var + mean * mean));
    p.log_var = std::log1p(var / (mean * mean));
    return p;
}

MomentSummary moment_summary(const std::vector<ClusterIntegrals>& ints,
                             const ArrayXd& lambda, const ChannelConfig& channel) {
    const Index m_total = static_cast<Index>(ints.size());
    if (lambda.size() != m_total) {
        throw std::invalid_argument(
            "moment_summary: intensity list size must equal the cluster count");
    }
    const CombinerMoments cm =
        combiner_moments(channel.scheme, channel.fading_scale_sq);
    MomentSummary s;
    s.ybar_mean.resize(m_total, 2);
    s.ybar_var.resize(m_total, 2);
    s.z_mean.resize(m_total, 2);
    s.z_var.resize(m_total, 2);
    s.log_mean.resize(m_total, 2);
    s.log_var.resize(m_total, 2);
    for (Index m = 0; m < m_total; ++m) {
        const YbarMoments yb = ybar_moments(lambda[m], cm, ints[m]);
        const FcMoments fc =
            fc_moments(yb, channel.sn_power, channel.ch_power[m],
                       channel.ch_noise_var[m], channel.fc_noise_var[m]);
        for (int j = 0; j < 2; ++j) {
            s.ybar_mean(m, j) = yb.mean[j];
            s.ybar_var(m, j) = yb.var[j];
            s.z_mean(m, j) = fc.mean[j];
            s.z_var(m, j) = fc.var[j];
            const LognormalParams lp = lognormal_match(fc.mean[j], fc.var[j]);
            s.log_mean(m, j) = lp.log_mean;
            s.log_var(m, j) = lp.log_var;
        }
    }
    return s;
}

MomentSummary moment_summary(const ClusterLayout& layout, const ArrayXd& lambda,
                             const TargetParams& target,
                             const SensingConfig& sensing,
                             const ChannelConfig& channel, double rel_tol) {
    const int m_total = layout.clusters();
    const double pfa = local_pfa(sensing.threshold, sensing.noise_std);
    std::vector<ClusterIntegrals> ints(m_total);
    for (int m = 0; m < m_total; ++m) {
        ThinningField thinning{
            pfa, [&](const Vec2& x) { return local_pd(x, target, sensing); }};
        ints[m] = cluster_integrals(layout.cell(m),
                                    layout.ch_positions.row(m).transpose(),
                                    channel.path_loss, channel.ref_distance,
                                    thinning, rel_tol);
    }
    return moment_summary(ints, lambda, channel);
}

FieldIntegralTable::FieldIntegralTable(const ClusterLayout& layout,
                                       double path_loss, double ref_distance,
                                       int order) {
    const GaussRule& rule = gauss_legendre(order);
    const int m_total = layout.clusters();
    nodes_.resize(m_total);
    kernel_mu_.resize(m_total);
    kernel_sig_.resize(m_total);
    const double mu_exp = 0.5 * path_loss;
    for (int m = 0; m < m_total; ++m) {
        const Rect cell = layout.cell(m);
        const Vec2 ch = layout.ch_positions.row(m).transpose();
        const double cx = 0.5 * (cell.x0 + cell.x1);
        const double hx = 0.5 * cell.width();
        const double cy = 0.5 * (cell.y0 + cell.y1);
        const double hy = 0.5 * cell.height();
        nodes_[m].resize(order * order, 2);
        kernel_mu_[m].resize(order * order);
        kernel_sig_[m].resize(order * order);
        for (int i = 0; i < order; ++i) {
            const double x = cx + hx * rule.nodes[i];
            for (int j = 0; j < order; ++j) {
                const double y = cy + hy * rule.nodes[j];
                const Index k = static_cast<Index>(i) * order + j;
                nodes_[m](k, 0) = x;
                nodes_[m](k, 1) = y;
                const double w =
                    rule.weights[i] * rule.weights[j] * hx * hy;
                const double r = std::hypot(x - ch.x(), y - ch.y());
                kernel_mu_[m][k] = w * clamped_kernel(r, ref_distance, mu_exp);
                kernel_sig_[m][k] = w * clamped_kernel(r, ref_distance, path_loss);
            }
        }
    }
}

std::vector<ClusterIntegrals> FieldIntegralTable::integrals(
    double pfa, const std::function<double(const Vec2&)>& pd) const {
    std::vector<ClusterIntegrals> out(nodes_.size());
    for (std::size_t m = 0; m < nodes_.size(); ++m) {
        const PointMatrix& nodes = nodes_[m];
        double mu1 = 0, sig1 = 0;
        for (Index k = 0; k < nodes.rows(); ++k) {
            const double p = pd(nodes.row(k).transpose());
            mu1 += kernel_mu_[m][k] * p;
            sig1 += kernel_sig_[m][k] * p;
        }
        out[m].i_mu0 = pfa * kernel_mu_[m].sum();
        out[m].i_sig0 = pfa * kernel_sig_[m].sum();
        out[m].i_mu1 = mu1;
        out[m].i_sig1 = sig1;
    }
    return out;
}

double deflection(double lambda, Scheme scheme, const ClusterIntegrals& ints) {
    if (!(ints.i_sig1 > 0)) {
        throw std::domain_error("deflection: variance integral must be positive");
    }
    const double delta = ints.i_mu1 - ints.i_mu0;
    return lambda * combining_gain(scheme) * delta * delta / ints.i_sig1;
}

SingleClusterPerf single_cluster_performance(double pfa_target, double mu0,
                                             double sigma0, double mu1,
                                             double sigma1) {
    if (!(sigma0 > 0) || !(sigma1 > 0)) {
        throw std::domain_error(
            "single_cluster_performance: standard deviations must be positive");
    }
    const double z = qfunc_inv(pfa_target);
    SingleClusterPerf perf;
    perf.threshold = sigma0 * z + mu0;
    perf.pd = qfunc((mu0 - mu1 + sigma0 * z) / sigma1);
    return perf;
}

double avg_received_power(double lambda, double sn_power,
                          const CombinerMoments& cm, const ClusterIntegrals& ints) {
    const double mean = lambda * cm.m1 * ints.i_mu0;
    const double var = lambda * cm.m2 * ints.i_sig0;
    return sn_power * (mean * mean + var);
}

double power_circular_exact(double outer_radius, double ref_distance,
                            double lambda, double sn_power, double path_loss,
                            double pfa, const CombinerMoments& cm) {
    if (!(outer_radius >= ref_distance) || !(ref_distance > 0)) {
        throw std::domain_error(
            "power_circular_exact: requires R >= r0 > 0");
    }
    const PowerLawTerms t = circular_power_terms(outer_radius, ref_distance,
                                                 path_loss, pfa, cm, false);
    return lambda * sn_power * (t.linear + lambda * t.quadratic);
}

double power_circular_approx(double outer_radius, double ref_distance,
                             double lambda, double sn_power, double path_loss,
                             double pfa, const CombinerMoments& cm) {
    const PowerLawTerms t = circular_power_terms(outer_radius, ref_distance,
                                                 path_loss, pfa, cm, true);
    return sn_power * (lambda * t.linear + lambda * lambda * t.quadratic);
}

double ptx_for_target_snr(double snr_ch, double ch_noise_var, double lambda,
                          double outer_radius, double ref_distance,
                          double path_loss, double pfa,
                          const CombinerMoments& cm) {
    const PowerLawTerms t = circular_power_terms(outer_radius, ref_distance,
                                                 path_loss, pfa, cm, true);
    const double denom = lambda * t.linear + lambda * lambda * t.quadratic;
    if (!(denom > 0)) {
        throw std::domain_error("ptx_for_target_snr: degenerate power-law denominator");
    }
    return ch_noise_var * snr_ch / denom;
}

}  // namespace clusterdd
