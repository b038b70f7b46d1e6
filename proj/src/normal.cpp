#include "clusterdd/normal.hpp"

#include <cmath>
#include <stdexcept>

namespace clusterdd {

namespace {
constexpr double kInvSqrt2 = 0.7071067811865475244;
constexpr double kInvSqrt2Pi = 0.3989422804014326779;
}  // namespace

double normal_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

double qfunc(double x) { return 0.5 * std::erfc(x * kInvSqrt2); }

double qfunc_inv(double p) {
    if (!(p > 0.0) || !(p < 1.0)) {
        throw std::domain_error("qfunc_inv: probability must lie in (0, 1)");
    }
    // Q is strictly decreasing; Q(-45) == 1 and Q(45) == 0 in double precision,
    // so [-45, 45] brackets every representable p in (0, 1).
    double lo = -45.0;
    double hi = 45.0;
    double x = 0.0;
    for (int it = 0; it < 200; ++it) {
        const double q = qfunc(x);
        if (q > p) {
            lo = x;
        } else if (q < p) {
            hi = x;
        } else {
            return x;
        }
        const double dens = normal_pdf(x);
        double next;
        if (dens > 1e-300) {
            next = x + (q - p) / dens;  // Newton step on Q(x) - p
        } else {
            next = 0.5 * (lo + hi);
        }
        if (!(next > lo) || !(next < hi)) {
            next = 0.5 * (lo + hi);
        }
        if (std::abs(next - x) <= 1e-15 * (1.0 + std::abs(next))) {
            return next;
        }
        x = next;
    }
    return x;
}

}  // namespace clusterdd
