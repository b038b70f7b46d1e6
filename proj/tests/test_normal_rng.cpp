#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "clusterdd/normal.hpp"
#include "clusterdd/rng.hpp"
#include "support/oracles.hpp"

using namespace clusterdd;

TEST_CASE("qfunc basic values") {
    CHECK(qfunc(0.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(qfunc(1.959963984540054) == doctest::Approx(0.025).epsilon(1e-12));
    // Symmetry Q(-x) = 1 - Q(x).
    for (double x : {0.1, 0.7, 1.5, 3.0, 6.0}) {
        CHECK(qfunc(-x) + qfunc(x) == doctest::Approx(1.0).epsilon(1e-14));
    }
    CHECK(qfunc(40.0) < 1e-300);
}

TEST_CASE("qfunc_inv agrees with an independent bisection") {
    for (double p : {1e-6, 1e-4, 0.01, 0.05, 0.3, 0.5, 0.7, 0.99, 0.9999}) {
        const double reference = oracles::bisect_qfunc_inv(p);
        CHECK(qfunc_inv(p) == doctest::Approx(reference).epsilon(1e-11));
        // Round trip to well below the documented 1e-12.
        CHECK(qfunc(qfunc_inv(p)) == doctest::Approx(p).epsilon(1e-12));
    }
    CHECK(qfunc_inv(0.5) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK_THROWS_AS(qfunc_inv(0.0), std::domain_error);
    CHECK_THROWS_AS(qfunc_inv(1.0), std::domain_error);
    CHECK_THROWS_AS(qfunc_inv(-0.2), std::domain_error);
}

TEST_CASE("rng streams are deterministic and seed-separated") {
    Rng a(42), b(42), c(43);
    bool all_equal = true;
    bool any_differ = false;
    for (int i = 0; i < 64; ++i) {
        const auto va = a.next_u64();
        all_equal &= (va == b.next_u64());
        any_differ |= (va != c.next_u64());
    }
    CHECK(all_equal);
    CHECK(any_differ);
    CHECK(derive_seed(1, 0) != derive_seed(1, 1));
    CHECK(derive_seed(1, 0) != derive_seed(2, 0));
}

TEST_CASE("uniform and normal moments") {
    Rng rng(7);
    const int n = 200000;
    std::vector<double> us(n), zs(n);
    for (int i = 0; i < n; ++i) {
        us[i] = rng.uniform();
        zs[i] = rng.normal();
    }
    const auto mu = oracles::mean_var(us);
    CHECK(std::abs(mu.mean - 0.5) < 5 * mu.mean_se);
    CHECK(std::abs(mu.var - 1.0 / 12.0) < 5 * mu.var_se);
    const auto mz = oracles::mean_var(zs);
    CHECK(std::abs(mz.mean) < 5 * mz.mean_se);
    CHECK(std::abs(mz.var - 1.0) < 5 * mz.var_se);
}

TEST_CASE("poisson sampler matches mean and variance across regimes") {
    Rng rng(11);
    for (double mean : {0.4, 3.0, 9.7, 30.0, 1562.5}) {
        const int n = mean < 50 ? 200000 : 50000;
        std::vector<double> counts(n);
        for (int i = 0; i < n; ++i) {
            counts[i] = static_cast<double>(rng.poisson(mean));
        }
        const auto mv = oracles::mean_var(counts);
        INFO("mean = ", mean);
        CHECK(std::abs(mv.mean - mean) < 5 * mv.mean_se);
        CHECK(std::abs(mv.var - mean) < 5 * mv.var_se);
    }
    CHECK(Rng(1).poisson(0.0) == 0);
    CHECK(Rng(1).poisson(-3.0) == 0);
}

TEST_CASE("rayleigh moments") {
    Rng rng(5);
    const double sigma = 0.75;
    const int n = 400000;
    std::vector<double> xs(n), x2s(n);
    for (int i = 0; i < n; ++i) {
        const double x = rng.rayleigh(sigma);
        xs[i] = x;
        x2s[i] = x * x;
    }
    const auto m1 = oracles::mean_var(xs);
    const auto m2 = oracles::mean_var(x2s);
    CHECK(std::abs(m1.mean - sigma * std::sqrt(M_PI / 2.0)) < 5 * m1.mean_se);
    CHECK(std::abs(m2.mean - 2.0 * sigma * sigma) < 5 * m2.mean_se);
}
