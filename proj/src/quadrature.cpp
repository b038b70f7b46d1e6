#include "clusterdd/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <queue>

namespace clusterdd {

namespace {

GaussRule compute_gauss_legendre(int n) {
    GaussRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        // Chebyshev initial guess, then Newton on P_n.
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double dp = 0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) {
                // One clean-up iteration past convergence.
                double q0 = 1.0, q1 = x;
                for (int k = 2; k <= n; ++k) {
                    const double q2 =
                        ((2.0 * k - 1.0) * x * q1 - (k - 1.0) * q0) / k;
                    q0 = q1;
                    q1 = q2;
                }
                dp = n * (x * q1 - q0) / (x * x - 1.0);
                break;
            }
        }
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    return rule;
}

using Integrand = std::function<double(double, double)>;

struct PanelEstimate {
    double value = 0;  // high-order tensor estimate
    double error = 0;  // |high - low|
};

struct Evaluator {
    const Integrand& f;
    const GaussRule& low;
    const GaussRule& high;
    long evaluations = 0;

    double tensor(const GaussRule& rule, const Rect& r) {
        const double cx = 0.5 * (r.x0 + r.x1);
        const double hx = 0.5 * (r.x1 - r.x0);
        const double cy = 0.5 * (r.y0 + r.y1);
        const double hy = 0.5 * (r.y1 - r.y0);
        const int n = static_cast<int>(rule.nodes.size());
        double sum = 0;
        for (int i = 0; i < n; ++i) {
            const double x = cx + hx * rule.nodes[i];
            double row = 0;
            for (int j = 0; j < n; ++j) {
                row += rule.weights[j] * f(x, cy + hy * rule.nodes[j]);
            }
            sum += rule.weights[i] * row;
        }
        evaluations += n * n;
        return sum * hx * hy;
    }

    PanelEstimate estimate(const Rect& r) {
        const double coarse = tensor(low, r);
        const double fine = tensor(high, r);
        return PanelEstimate{fine, std::abs(fine - coarse)};
    }
};

struct Panel {
    Rect rect;
    PanelEstimate est;
    long id = 0;  // insertion order, the deterministic tie-break
};

struct WorseError {
    bool operator()(const Panel& a, const Panel& b) const {
        if (a.est.error != b.est.error) return a.est.error < b.est.error;
        return a.id > b.id;
    }
};

}  // namespace

const GaussRule& gauss_legendre(int n) {
    static std::mutex mutex;
    static std::map<int, GaussRule> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(n);
    if (it == cache.end()) {
        it = cache.emplace(n, compute_gauss_legendre(n)).first;
    }
    return it->second;
}

namespace {

QuadratureResult integrate_impl(const Integrand& f, const Rect& domain,
                                double rel_tol, int max_depth,
                                std::vector<Rect>* panels_out) {
    if (!(rel_tol > 0)) {
        throw std::invalid_argument("integrate_rect: tolerance must be positive");
    }
    if (!(domain.width() > 0) || !(domain.height() > 0)) {
        throw std::invalid_argument("integrate_rect: degenerate domain");
    }
    Evaluator eval{f, gauss_legendre(7), gauss_legendre(15)};

    const double min_extent =
        std::max(domain.width(), domain.height()) * std::ldexp(1.0, -max_depth);
    constexpr long kMaxSplits = 400000;

    std::priority_queue<Panel, std::vector<Panel>, WorseError> queue;
    std::vector<Rect> frozen_panels;
    long next_id = 0;
    Panel root{domain, eval.estimate(domain), next_id++};
    double total_value = root.est.value;
    double total_error = root.est.error;
    double frozen_error = 0;  // panels too small to split further
    queue.push(root);

    long splits = 0;
    bool budget_exhausted = false;
    while (true) {
        const double tol_abs = rel_tol * std::abs(total_value);
        if (total_error <= tol_abs) break;
        if (queue.empty()) {
            budget_exhausted = true;
            break;
        }
        const Panel worst = queue.top();
        queue.pop();
        const Rect& r = worst.rect;
        const bool splittable =
            std::max(r.width(), r.height()) > min_extent && splits < kMaxSplits;
        if (!splittable) {
            // Its error is now permanent; if the remaining budget cannot be
            // met even in principle, stop early.
            frozen_error += worst.est.error;
            if (frozen_error > tol_abs) {
                budget_exhausted = true;
                break;
            }
            continue;
        }
        ++splits;
        Rect a = r, b = r;
        if (r.width() >= r.height()) {
            const double mid = 0.5 * (r.x0 + r.x1);
            a.x1 = mid;
            b.x0 = mid;
        } else {
            const double mid = 0.5 * (r.y0 + r.y1);
            a.y1 = mid;
            b.y0 = mid;
        }
        const Panel pa{a, eval.estimate(a), next_id++};
        const Panel pb{b, eval.estimate(b), next_id++};
        total_value += pa.est.value + pb.est.value - worst.est.value;
        total_error += pa.est.error + pb.est.error - worst.est.error;
        queue.push(pa);
        queue.push(pb);
    }

    QuadratureResult result{total_value, total_error, eval.evaluations};
    if (budget_exhausted &&
        total_error > rel_tol * std::abs(total_value)) {
        throw QuadratureError(
            "integrate_rect: refinement budget exhausted before reaching "
            "tolerance",
            total_value, total_error);
    }
    return result;
}

}  // namespace clusterdd
