#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "clusterdd/analytic.hpp"
#include "support/oracles.hpp"

using namespace clusterdd;

namespace {

SensingConfig default_sensing() {
    SensingConfig cfg;
    cfg.noise_std = std::sqrt(10.0 * std::pow(10.0, -1.2));
    cfg.saturation_distance = 1.0;
    cfg.exponent = 2.0;
    cfg.threshold = threshold_from_pfa(0.01, cfg.noise_std);
    return cfg;
}

ChannelConfig default_channel(int clusters, Scheme scheme, double alpha) {
    ChannelConfig cfg;
    cfg.fading_scale_sq = 1.0 / std::sqrt(2.0);
    cfg.scheme = scheme;
    cfg.path_loss = alpha;
    cfg.ref_distance = 1.0;
    cfg.sn_power = 1.0;
    cfg.ch_power = ArrayXd::Constant(clusters, 1.0);
    cfg.ch_noise_var = ArrayXd::Constant(clusters, 0.01);
    cfg.fc_noise_var = ArrayXd::Constant(clusters, 0.01);
    return cfg;
}

}  // namespace

TEST_CASE("combiner_moments: closed forms") {
    const CombinerMoments mr = combiner_moments(Scheme::dMRTC, 0.5);
    CHECK(mr.m1 == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(mr.m2 == doctest::Approx(2.0).epsilon(1e-14));
    const CombinerMoments eg = combiner_moments(Scheme::dEGTC, 0.5);
    CHECK(eg.m1 == doctest::Approx(std::sqrt(M_PI) / 2.0).epsilon(1e-14));
    CHECK(eg.m2 == doctest::Approx(1.0).epsilon(1e-14));
    // Jensen gap: the combined gain is non-degenerate.
    for (Scheme s : {Scheme::dMRTC, Scheme::dEGTC}) {
        const CombinerMoments cm = combiner_moments(s, 1.3);
        CHECK(cm.m2 - cm.m1 * cm.m1 > 0.0);
    }
    CHECK_THROWS_AS(combiner_moments(Scheme::dEGTC, 0.0), std::domain_error);
}

TEST_CASE("combiner_moments: Monte-Carlo moments of the combined gain") {
    const double scale_sq = 0.5;
    Rng rng(61);
    const long n = 1000000;
    std::vector<double> eg(n), mr(n);
    for (long i = 0; i < n; ++i) {
        const double mag = rng.rayleigh(std::sqrt(scale_sq));
        eg[i] = mag;
        mr[i] = mag * mag;
    }
    const auto meg = oracles::mean_var(eg);
    const auto mmr = oracles::mean_var(mr);
    const CombinerMoments ceg = combiner_moments(Scheme::dEGTC, scale_sq);
    const CombinerMoments cmr = combiner_moments(Scheme::dMRTC, scale_sq);
    CHECK(std::abs(meg.mean - ceg.m1) < 5 * meg.mean_se);
    CHECK(std::abs(mmr.mean - cmr.m1) < 5 * mmr.mean_se);
    // Second moments: E[f^2] = E[|H|^2] (dEGTC) and E[|H|^4] (dMRTC).
    std::vector<double> eg2(n), mr2(n);
    for (long i = 0; i < n; ++i) {
        eg2[i] = eg[i] * eg[i];
        mr2[i] = mr[i] * mr[i];
    }
    const auto meg2 = oracles::mean_var(eg2);
    const auto mmr2 = oracles::mean_var(mr2);
    CHECK(std::abs(meg2.mean - ceg.m2) < 5 * meg2.mean_se);
    CHECK(std::abs(mmr2.mean - cmr.m2) < 5 * mmr2.mean_se);
}

TEST_CASE("combining_gain: exact constants, scale-free, matches m1^2/m2") {
    CHECK(combining_gain(Scheme::dMRTC) == 0.5);
    CHECK(combining_gain(Scheme::dEGTC) == doctest::Approx(M_PI / 4.0).epsilon(1e-15));
    for (double scale_sq : {0.1, 1.0 / std::sqrt(2.0), 10.0}) {
        for (Scheme s : {Scheme::dMRTC, Scheme::dEGTC}) {
            const CombinerMoments cm = combiner_moments(s, scale_sq);
            CHECK(combining_gain(s) ==
                  doctest::Approx(cm.m1 * cm.m1 / cm.m2).epsilon(1e-12));
        }
    }
}

TEST_CASE("ybar_moments: zero intensity and linearity") {
    const CombinerMoments cm = combiner_moments(Scheme::dEGTC, 0.5);
    const ClusterIntegrals ints{1.7, 2.3, 0.4, 0.9};
    const YbarMoments zero = ybar_moments(0.0, cm, ints);
    CHECK(zero.mean[0] == 0.0);
    CHECK(zero.mean[1] == 0.0);
    CHECK(zero.var[0] == 0.0);
    CHECK(zero.var[1] == 0.0);
    const YbarMoments one = ybar_moments(1.3, cm, ints);
    const YbarMoments two = ybar_moments(2.6, cm, ints);
    for (int j = 0; j < 2; ++j) {
        CHECK(two.mean[j] == doctest::Approx(2.0 * one.mean[j]).epsilon(1e-14));
        CHECK(two.var[j] == doctest::Approx(2.0 * one.var[j]).epsilon(1e-14));
    }
    CHECK(one.mean[0] == doctest::Approx(1.3 * cm.m1 * 1.7).epsilon(1e-14));
    CHECK(one.var[1] == doctest::Approx(1.3 * cm.m2 * 0.9).epsilon(1e-14));
}

TEST_CASE("fc_moments: identity map and noise-only") {
    YbarMoments yb;
    yb.mean << 0.5, 1.5;
    yb.var << 0.2, 0.8;
    const FcMoments ident = fc_moments(yb, 1.0, 1.0, 0.0, 0.0);
    CHECK(ident.mean[0] == 0.5);
    CHECK(ident.mean[1] == 1.5);
    CHECK(ident.var[0] == 0.2);
    CHECK(ident.var[1] == 0.8);

    YbarMoments silent;  // no deployment signal at all
    const FcMoments noise = fc_moments(silent, 2.0, 3.0, 0.02, 0.05);
    CHECK(noise.mean[0] == 0.0);
    CHECK(noise.var[0] == doctest::Approx(3.0 * 0.02 + 0.05).epsilon(1e-14));
    const FcMoments mixed = fc_moments(yb, 2.0, 3.0, 0.02, 0.05);
    CHECK(mixed.mean[1] == doctest::Approx(std::sqrt(6.0) * 1.5).epsilon(1e-14));
    CHECK(mixed.var[1] == doctest::Approx(6.0 * 0.8 + 0.11).epsilon(1e-14));
}

TEST_CASE("lognormal_match: anchors and round trips") {
    const LognormalParams unit = lognormal_match(1.0, 0.0);
    CHECK(unit.log_mean == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(unit.log_var == doctest::Approx(0.0).epsilon(1e-14));
    const LognormalParams e = lognormal_match(std::exp(1.0), 0.0);
    CHECK(e.log_mean == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(e.log_var == doctest::Approx(0.0).epsilon(1e-14));

    const LognormalParams p = lognormal_match(2.0, 1.0);
    const double mean_back = std::exp(p.log_mean + 0.5 * p.log_var);
    const double var_back = (std::exp(p.log_var) - 1.0) *
                            std::exp(2.0 * p.log_mean + p.log_var);
    CHECK(mean_back == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(var_back == doctest::Approx(1.0).epsilon(1e-12));

    CHECK_THROWS_AS(lognormal_match(0.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(lognormal_match(-2.0, 1.0), std::domain_error);
}

TEST_CASE("deflection: degenerate, linear in intensity, scheme ratio") {
    const ClusterIntegrals flat{1.2, 1.2, 0.5, 0.5};
    CHECK(deflection(2.0, Scheme::dEGTC, flat) == 0.0);
    const ClusterIntegrals ints{1.0, 1.8, 0.4, 0.7};
    CHECK(deflection(2.0, Scheme::dEGTC, ints) ==
          doctest::Approx(2.0 * deflection(1.0, Scheme::dEGTC, ints)).epsilon(1e-13));
    // Same integrals, scheme ratio is (pi/4)/(1/2) = pi/2.
    CHECK(deflection(1.0, Scheme::dEGTC, ints) /
              deflection(1.0, Scheme::dMRTC, ints) ==
          doctest::Approx(M_PI / 2.0).epsilon(1e-13));
    CHECK_THROWS_AS(deflection(1.0, Scheme::dEGTC, ClusterIntegrals{1, 2, 0.3, 0.0}),
                    std::domain_error);
}

TEST_CASE("single_cluster_performance: anchors") {
    const SingleClusterPerf same = single_cluster_performance(0.17, 1.0, 2.0, 1.0, 2.0);
    CHECK(same.pd == doctest::Approx(0.17).epsilon(1e-12));
    const SingleClusterPerf sure = single_cluster_performance(0.05, 0.0, 1.0, 1e9, 1.0);
    CHECK(sure.pd == doctest::Approx(1.0).epsilon(1e-12));
    // Frozen reference: Q(Qinv(0.05) - 2) = 0.63876 (from the erfc evaluation).
    const SingleClusterPerf shift = single_cluster_performance(0.05, 0.0, 1.0, 2.0, 1.0);
    CHECK(shift.pd == doctest::Approx(0.6387638).epsilon(1e-6));
    CHECK(shift.threshold == doctest::Approx(qfunc_inv(0.05)).epsilon(1e-12));
    CHECK_THROWS_AS(single_cluster_performance(0.05, 0.0, 0.0, 1.0, 1.0),
                    std::domain_error);
}

TEST_CASE("received power: zero intensity, quadratic growth, two routes agree") {
    const CombinerMoments cm = combiner_moments(Scheme::dEGTC, 1.0 / std::sqrt(2.0));
    const ClusterIntegrals ints = annulus_integrals(1.0, 50.0, 2.0, 0.01, 1e-10);
    CHECK(avg_received_power(0.0, 1.0, cm, ints) == 0.0);
    // lambda^2 term dominates for large intensity.
    const double big = avg_received_power(4000.0, 1.0, cm, ints);
    const double half = avg_received_power(2000.0, 1.0, cm, ints);
    CHECK(big / half == doctest::Approx(4.0).epsilon(0.01));
    // Identity: P_tx (mean^2 + var) computed from ybar_moments.
    const YbarMoments yb = ybar_moments(1.7, cm, ints);
    const double via_moments = 2.5 * (yb.mean[0] * yb.mean[0] + yb.var[0]);
    CHECK(avg_received_power(1.7, 2.5, cm, ints) ==
          doctest::Approx(via_moments).epsilon(1e-12));
}

TEST_CASE("power_circular_exact equals the quadrature route on the annulus") {
    const double r0 = 1.0, pfa = 0.01;
    for (Scheme scheme : {Scheme::dEGTC, Scheme::dMRTC}) {
        const CombinerMoments cm = combiner_moments(scheme, 1.0 / std::sqrt(2.0));
        for (double alpha : {2.0, 4.0}) {
            for (double R : {50.0 * std::sqrt(2.0), 30.0}) {
                const ClusterIntegrals ints =
                    annulus_integrals(r0, R, alpha, pfa, 1e-10);
                const double via_quadrature =
                    avg_received_power(1.0, 1.0, cm, ints);
                const double closed_form =
                    power_circular_exact(R, r0, 1.0, 1.0, alpha, pfa, cm);
                INFO("alpha = ", alpha, ", R = ", R, ", scheme = ",
                     scheme_name(scheme));
                CHECK(closed_form ==
                      doctest::Approx(via_quadrature).epsilon(1e-6));
            }
        }
    }
    const CombinerMoments cm = combiner_moments(Scheme::dEGTC, 0.5);
    CHECK(power_circular_exact(1.0, 1.0, 1.0, 1.0, 2.0, 0.01, cm) == 0.0);
    CHECK_THROWS_AS(power_circular_exact(0.5, 1.0, 1.0, 1.0, 2.0, 0.01, cm),
                    std::domain_error);
    // Monotone in the outer radius.
    double prev = 0;
    for (double R : {2.0, 5.0, 20.0, 80.0}) {
        const double p = power_circular_exact(R, 1.0, 1.0, 1.0, 4.0, 0.01, cm);
        CHECK(p > prev);
        prev = p;
    }
}

TEST_CASE("power_circular_approx: gap to exact and scaling laws") {
    const double r0 = 1.0, pfa = 0.01;
    // Low-density regime keeps the large-R approximation inside 5% from
    // R/r0 = 30 upward; the gap then shrinks as R grows.
    const double lambda = 0.1;
    for (Scheme scheme : {Scheme::dEGTC, Scheme::dMRTC}) {
        const CombinerMoments cm = combiner_moments(scheme, 1.0 / std::sqrt(2.0));
        for (double R : {30.0, 40.0, 50.0, 70.0, 100.0, 300.0}) {
            const double exact =
                power_circular_exact(R, r0, lambda, 1.0, 2.0, pfa, cm);
            const double approx =
                power_circular_approx(R, r0, lambda, 1.0, 2.0, pfa, cm);
            INFO("R = ", R, ", scheme = ", scheme_name(scheme));
            CHECK(std::abs(approx - exact) / exact < 0.05);
        }
    }
    // Doubling the intensity quadruples the power once the quadratic term
    // dominates: O(lambda^2 R^2) at alpha 2, O(lambda^2 ln^2 R) at alpha 4.
    const CombinerMoments cm = combiner_moments(Scheme::dEGTC, 1.0 / std::sqrt(2.0));
    const double a2_ratio = power_circular_approx(100.0, r0, 2.0, 1.0, 2.0, pfa, cm) /
                            power_circular_approx(100.0, r0, 1.0, 1.0, 2.0, pfa, cm);
    CHECK(a2_ratio == doctest::Approx(4.0).epsilon(0.02));
    const double a4_ratio = power_circular_approx(100.0, r0, 40.0, 1.0, 4.0, pfa, cm) /
                            power_circular_approx(100.0, r0, 20.0, 1.0, 4.0, pfa, cm);
    CHECK(a4_ratio == doctest::Approx(4.0).epsilon(0.02));
}

TEST_CASE("ptx_for_target_snr: inverse of the approximate power law") {
    const double pfa = 0.01;
    for (Scheme scheme : {Scheme::dEGTC, Scheme::dMRTC}) {
        const CombinerMoments cm = combiner_moments(scheme, 1.0 / std::sqrt(2.0));
        for (double alpha : {2.0, 4.0}) {
            const double snr = 100.0, noise = 0.01, lambda = 1.0, R = 70.0;
            const double ptx =
                ptx_for_target_snr(snr, noise, lambda, R, 1.0, alpha, pfa, cm);
            const double back =
                power_circular_approx(R, 1.0, lambda, ptx, alpha, pfa, cm) / noise;
            CHECK(back == doctest::Approx(snr).epsilon(1e-9));
            // Decreasing in intensity and radius; linear in the SNR target.
            CHECK(ptx_for_target_snr(snr, noise, 2.0, R, 1.0, alpha, pfa, cm) < ptx);
            CHECK(ptx_for_target_snr(snr, noise, lambda, 2 * R, 1.0, alpha, pfa, cm) < ptx);
            CHECK(ptx_for_target_snr(2 * snr, noise, lambda, R, 1.0, alpha, pfa, cm) ==
                  doctest::Approx(2 * ptx).epsilon(1e-12));
        }
    }
}

TEST_CASE("moment summary: H0 symmetric across clusters, H1 peaks at the target") {
    const ClusterLayout layout = make_layout(100.0, 2);
    const SensingConfig sensing = default_sensing();
    const ChannelConfig channel = default_channel(4, Scheme::dEGTC, 2.0);
    const TargetParams target{10.0, Vec2{20, 20}};
    const MomentSummary s = moment_summary(layout, ArrayXd::Constant(4, 1.0),
                                           target, sensing, channel, 1e-8);
    CHECK(s.clusters() == 4);
    for (int m = 1; m < 4; ++m) {
        CHECK(s.ybar_mean(m, 0) == doctest::Approx(s.ybar_mean(0, 0)).epsilon(1e-6));
        CHECK(s.ybar_var(m, 0) == doctest::Approx(s.ybar_var(0, 0)).epsilon(1e-6));
    }
    // The target sits in cluster 0; its H1 lift dominates the others'.
    for (int m = 1; m < 4; ++m) {
        CHECK(s.ybar_mean(0, 1) - s.ybar_mean(0, 0) >
              s.ybar_mean(m, 1) - s.ybar_mean(m, 0));
    }
    // Means and variances rise under H1 everywhere (the signature reaches
    // every cell).
    for (int m = 0; m < 4; ++m) {
        CHECK(s.ybar_mean(m, 1) > s.ybar_mean(m, 0));
        CHECK(s.ybar_var(m, 1) > s.ybar_var(m, 0));
        CHECK(s.z_var(m, 0) > 0.0);
        CHECK(s.log_var(m, 0) > 0.0);
    }
}

TEST_CASE("field integral table tracks the adaptive integrals") {
    const ClusterLayout layout = make_layout(100.0, 4);
    const SensingConfig sensing = default_sensing();
    const double pfa = local_pfa(sensing.threshold, sensing.noise_std);
    for (double alpha : {2.0, 4.0}) {
        const FieldIntegralTable table(layout, alpha, 1.0);
        for (const Vec2& pos : {Vec2{20, 20}, Vec2{50, 50}, Vec2{88, 13}}) {
            const TargetParams target{10.0, pos};
            auto pd = [&](const Vec2& x) { return local_pd(x, target, sensing); };
            const auto fast = table.integrals(pfa, pd);
            for (int m : {0, 5, 15}) {
                const ClusterIntegrals slow = cluster_integrals(
                    layout.cell(m), layout.ch_positions.row(m).transpose(),
                    alpha, 1.0, ThinningField{pfa, pd}, 1e-9);
                INFO("alpha = ", alpha, " m = ", m, " target = (", pos.x(),
                     ",", pos.y(), ")");
                CHECK(fast[m].i_mu0 == doctest::Approx(slow.i_mu0).epsilon(2e-3));
                CHECK(fast[m].i_mu1 == doctest::Approx(slow.i_mu1).epsilon(2e-3));
                CHECK(fast[m].i_sig0 == doctest::Approx(slow.i_sig0).epsilon(2e-3));
                CHECK(fast[m].i_sig1 == doctest::Approx(slow.i_sig1).epsilon(2e-3));
            }
        }
    }
}

TEST_CASE("Campbell consistency: thinned random sums match the integrals") {
    // Kernel g = clamped path gain; retention = the H1 detection field.
    const ClusterLayout layout = make_layout(25.0, 1);
    const SensingConfig sensing = default_sensing();
    const TargetParams target{10.0, Vec2{8, 12}};
    const Vec2 ch = layout.ch_positions.row(0).transpose();
    const double lambda = 2.0;
    const double alpha = 2.0;

    ThinningField thinning{
        local_pfa(sensing.threshold, sensing.noise_std),
        [&](const Vec2& x) { return local_pd(x, target, sensing); }};
    const ClusterIntegrals ints =
        cluster_integrals(layout.cell(0), ch, alpha, 1.0, thinning, 1e-9);

    Rng rng(62);
    const int trials = 20000;
    std::vector<double> sums(trials);
    for (int t = 0; t < trials; ++t) {
        const PointSample sample = sample_ppp(layout, lambda, rng);
        const auto decisions =
            simulate_decisions(sample, Hypothesis::H1, target, sensing, rng);
        double sum = 0;
        const PointMatrix& pts = sample.clusters[0];
        for (Index i = 0; i < pts.rows(); ++i) {
            if (!decisions[0][i]) continue;
            const double d = std::hypot(pts(i, 0) - ch.x(), pts(i, 1) - ch.y());
            sum += path_gain(d, 1.0, alpha);
        }
        sums[t] = sum;
    }
    const auto mv = oracles::mean_var(sums);
    CHECK(std::abs(mv.mean - lambda * ints.i_mu1) < 5 * mv.mean_se);
    CHECK(std::abs(mv.var - lambda * ints.i_sig1) < 5 * mv.var_se);
}
