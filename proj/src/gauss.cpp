#include "sm/gauss.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace sm {

namespace {

GaussRule compute_rule(int n) {
    GaussRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        // Chebyshev-style initial guess, then Newton on P_n.
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double p0, p1, dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            p0 = 1.0;
            p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        rule.nodes[i] = x;
        rule.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return rule;
}

}  // namespace

const GaussRule& gauss_rule(int order) {
    if (order < 1) throw std::invalid_argument("gauss_rule: order must be positive");
    static std::map<int, GaussRule> cache;
    static std::mutex mutex;
    std::lock_guard lock(mutex);
    auto it = cache.find(order);
    if (it == cache.end()) it = cache.emplace(order, compute_rule(order)).first;
    return it->second;
}

double gauss_integrate(const std::function<double(double)>& f, double a, double b, int order) {
    const GaussRule& rule = gauss_rule(order);
    double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double sum = 0.0;
    for (size_t i = 0; i < rule.nodes.size(); ++i) sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
    return half * sum;
}

double adaptive_integrate(const std::function<double(double)>& f, double a, double b, double tol,
                          int depth) {
    double prev = gauss_integrate(f, a, b, 7);
    for (int order = 15; order <= 255; order = 2 * order + 1) {
        double cur = gauss_integrate(f, a, b, order);
        if (std::abs(cur - prev) <= tol) return cur;
        prev = cur;
    }
    if (depth >= 30) throw std::runtime_error("adaptive_integrate: no convergence");
    double mid = 0.5 * (a + b);
    return adaptive_integrate(f, a, mid, tol / 2, depth + 1) +
           adaptive_integrate(f, mid, b, tol / 2, depth + 1);
}

}  // namespace sm
