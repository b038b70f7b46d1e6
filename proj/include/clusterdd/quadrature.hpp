#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "clusterdd/types.hpp"

namespace clusterdd {

struct QuadratureResult {
    double value = 0;
    double error_bound = 0;
    long evaluations = 0;
};

/// Raised when refinement exhausts its budget before the requested tolerance
/// is met. Carries the last estimate and its bound so callers can still
/// inspect the partial answer.
class QuadratureError : public std::runtime_error {
public:
    QuadratureError(const std::string& what, double estimate, double error_bound)
        : std::runtime_error(what), estimate_(estimate), error_bound_(error_bound) {}

    double estimate() const { return estimate_; }
    double error_bound() const { return error_bound_; }

private:
    double estimate_;
    double error_bound_;
};

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1],
/// computed by Newton iteration on the Legendre recurrence (machine
/// accurate, deterministic).
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

const GaussRule& gauss_legendre(int n);

/// Adaptive tensor-product Gauss-Legendre quadrature of f over a rectangle.
/// Globally-driven refinement: the panel with the largest error estimate
/// (high-order vs low-order tensor rule) is bisected along its longer axis
/// until the summed error bound meets rel_tol relative to the integral.
/// Effort therefore concentrates where the integrand kinks. Deterministic
/// for fixed inputs.
///
/// max_depth caps how far a panel may shrink (2^-max_depth of the original
/// extent). Throws QuadratureError if the budget is exhausted first.
QuadratureResult integrate_rect(const std::function<double(double, double)>& f,
                                const Rect& domain, double rel_tol,
                                int max_depth = 30);

/// The panel partition the adaptive refinement settles on for f. Useful for
/// building composite fixed rules tuned to a difficult kernel.
std::vector<Rect> adaptive_panels(const std::function<double(double, double)>& f,
                                  const Rect& domain, double rel_tol,
                                  int max_depth = 30);

}  // namespace clusterdd
