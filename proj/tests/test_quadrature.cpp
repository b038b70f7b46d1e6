#include <doctest.h>

#include <cmath>

#include "clusterdd/analytic.hpp"
#include "clusterdd/quadrature.hpp"
#include "support/oracles.hpp"

using namespace clusterdd;

TEST_CASE("integrate_rect: polynomials are exact") {
    const Rect r{0, 0, 2, 3};
    const auto constant = integrate_rect([](double, double) { return 1.5; }, r, 1e-10);
    CHECK(constant.value == doctest::Approx(9.0).epsilon(1e-13));
    const auto poly = integrate_rect(
        [](double x, double y) { return x * x * y + y * y; }, r, 1e-10);
    // ∫0^2∫0^3 (x^2 y + y^2) dy dx = 12 + 18 = 30.
    CHECK(poly.value == doctest::Approx(30.0).epsilon(1e-13));
}

TEST_CASE("integrate_rect: smooth non-polynomial integrand") {
    const Rect r{0, 0, 1, 1};
    const auto res = integrate_rect(
        [](double x, double y) { return std::exp(x) * std::sin(y); }, r, 1e-12);
    const double exact = (std::exp(1.0) - 1.0) * (1.0 - std::cos(1.0));
    CHECK(res.value == doctest::Approx(exact).epsilon(1e-12));
}

TEST_CASE("integrate_rect: deterministic across invocations") {
    const Rect r{-1, -1, 1, 1};
    auto f = [](double x, double y) {
        return 1.0 / std::max(0.25, std::hypot(x, y));
    };
    const auto a = integrate_rect(f, r, 1e-9);
    const auto b = integrate_rect(f, r, 1e-9);
    CHECK(a.value == b.value);
    CHECK(a.evaluations == b.evaluations);
}

TEST_CASE("annulus kernel integrals match closed-form polar integrals") {
    // Exponent alpha on the annulus r0..R with constant retention p:
    //   alpha = 2: 2 pi p ln(R/r0); mean-kernel exponent 1: 2 pi p (R - r0).
    const double r0 = 1.0, R = 70.0, pfa = 0.01;
    const ClusterIntegrals quad = annulus_integrals(r0, R, 2.0, pfa, 1e-10);
    CHECK(quad.i_sig0 ==
          doctest::Approx(2.0 * M_PI * pfa * std::log(R / r0)).epsilon(1e-9));
    CHECK(quad.i_mu0 ==
          doctest::Approx(2.0 * M_PI * pfa * (R - r0)).epsilon(1e-9));

    const ClusterIntegrals quad4 = annulus_integrals(r0, R, 4.0, pfa, 1e-10);
    CHECK(quad4.i_mu0 ==
          doctest::Approx(2.0 * M_PI * pfa * std::log(R / r0)).epsilon(1e-9));
    const double exact_sig4 =
        M_PI * pfa * (R * R - r0 * r0) / (R * R * r0 * r0);
    CHECK(quad4.i_sig0 == doctest::Approx(exact_sig4).epsilon(1e-9));
    CHECK_THROWS_AS(annulus_integrals(1.0, 0.5, 2.0, pfa, 1e-8),
                    std::domain_error);
}

TEST_CASE("cluster integrals: zero retention gives zero") {
    const ClusterIntegrals ints = cluster_integrals(
        Rect{0, 0, 50, 50}, Vec2{25, 25}, 2.0, 1.0, ThinningField{0.0, nullptr},
        1e-8);
    CHECK(ints.i_mu0 == 0.0);
    CHECK(ints.i_mu1 == 0.0);
    CHECK(ints.i_sig0 == 0.0);
    CHECK(ints.i_sig1 == 0.0);
}

TEST_CASE("cluster integrals agree with Monte-Carlo integration") {
    const Rect cell{0, 0, 50, 50};
    const Vec2 ch{25, 25};
    const double pfa = 0.01;
    for (double alpha : {2.0, 4.0}) {
        const ClusterIntegrals ints = cluster_integrals(
            cell, ch, alpha, 1.0, ThinningField{pfa, nullptr}, 1e-9);
        Rng rng(51);
        auto kernel_mu = [&](double x, double y) {
            const double d = std::hypot(x - ch.x(), y - ch.y());
            return pfa * std::pow(std::max(1.0, d), -alpha / 2.0);
        };
        auto kernel_sig = [&](double x, double y) {
            const double d = std::hypot(x - ch.x(), y - ch.y());
            return pfa * std::pow(std::max(1.0, d), -alpha);
        };
        const auto mc_mu = oracles::mc_integrate(kernel_mu, cell, 10000000, rng);
        const auto mc_sig = oracles::mc_integrate(kernel_sig, cell, 10000000, rng);
        INFO("alpha = ", alpha);
        CHECK(std::abs(ints.i_mu0 - mc_mu.value) < 3 * mc_mu.se);
        CHECK(std::abs(ints.i_sig0 - mc_sig.value) < 3 * mc_sig.se);
    }
}

TEST_CASE("quadrature failure carries the partial estimate") {
    // A needle the coarse rule cannot resolve within two refinement levels.
    auto needle = [](double x, double y) {
        return 1.0 / (1e-7 + std::abs(x - 0.37193) + std::abs(y - 0.55331));
    };
    try {
        integrate_rect(needle, Rect{0, 0, 1, 1}, 1e-12, 2);
        FAIL("expected QuadratureError");
    } catch (const QuadratureError& e) {
        CHECK(e.estimate() > 0.0);
        CHECK(e.error_bound() > 0.0);
    }
}
