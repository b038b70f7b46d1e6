#pragma once

namespace clusterdd {

/// Standard normal density.
double normal_pdf(double x);

/// Gaussian tail probability Q(x) = P(N(0,1) > x), evaluated through the
/// complementary error function. Accurate to roughly 1e-15 relative for
/// positive arguments.
double qfunc(double x);

/// Inverse of qfunc on (0, 1). Bracketed Newton iteration with a bisection
/// fallback; converges well below 1e-12 in the argument.
/// Throws std::domain_error outside (0, 1).
double qfunc_inv(double p);

}  // namespace clusterdd
