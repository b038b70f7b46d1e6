#include "clusterdd/rng.hpp"

#include <cmath>

namespace clusterdd {

namespace {

inline std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
}

constexpr double kTwoPi = 6.283185307179586476925;

}  // namespace

Rng::Rng(std::uint64_t seed) {
    // Expand the seed with splitmix64 so zero and near-equal seeds still give
    // well-separated xoshiro states.
    std::uint64_t s = seed;
    for (auto& word : state_) {
        s += 0x9E3779B97F4A7C15ull;
        word = mix64(s);
    }
}

std::uint64_t Rng::next_u64() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
}

double Rng::uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double Rng::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const double u1 = 1.0 - uniform();  // (0, 1], keeps the log finite
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double angle = kTwoPi * u2;
    spare_ = r * std::sin(angle);
    has_spare_ = true;
    return r * std::cos(angle);
}

double Rng::normal(double mean, double stddev) {
    return mean + stddev * normal();
}

double Rng::rayleigh(double sigma) {
    const double u = 1.0 - uniform();
    return sigma * std::sqrt(-2.0 * std::log(u));
}

std::int64_t Rng::poisson(double mean) {
    if (!(mean > 0.0)) {
        return 0;
    }
    if (mean < 10.0) {
        const double limit = std::exp(-mean);
        std::int64_t count = 0;
        double prod = uniform();
        while (prod > limit) {
            prod *= uniform();
            ++count;
        }
        return count;
    }
    // PTRD (Hormann 1993): exact for arbitrary large means, a handful of
    // uniforms per draw.
    const double smu = std::sqrt(mean);
    const double b = 0.931 + 2.53 * smu;
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double v_r = 0.9277 - 3.6224 / (b - 2.0);
    const double log_mean = std::log(mean);
    for (;;) {
        double v = uniform();
        double u;
        if (v <= 0.86 * v_r) {
            u = v / v_r - 0.43;
            return static_cast<std::int64_t>(
                std::floor((2.0 * a / (0.5 - std::abs(u)) + b) * u + mean + 0.445));
        }
        if (v >= v_r) {
            u = uniform() - 0.5;
        } else {
            u = v / v_r - 0.93;
            u = (u < 0.0 ? -0.5 : 0.5) - u;
            v = uniform() * v_r;
        }
        const double us = 0.5 - std::abs(u);
        if (us < 0.013 && v > us) {
            continue;
        }
        const double kf = std::floor((2.0 * a / us + b) * u + mean + 0.445);
        v = v * inv_alpha / (a / (us * us) + b);
        if (kf >= 10.0) {
            if (std::log(v * smu) <=
                (kf + 0.5) * std::log(mean / kf) - mean - 0.91893853320467267 + kf -
                    (1.0 / 12.0 - (1.0 / 360.0 - 1.0 / (1260.0 * kf * kf)) / (kf * kf)) / kf) {
                return static_cast<std::int64_t>(kf);
            }
        } else if (kf >= 0.0) {
            if (std::log(v) <= kf * log_mean - mean - std::lgamma(kf + 1.0)) {
                return static_cast<std::int64_t>(kf);
            }
        }
    }
}

}  // namespace clusterdd
