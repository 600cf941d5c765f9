#pragma once

#include <functional>
#include <vector>

namespace sm {

struct GaussRule {
    std::vector<double> nodes;    // on [-1, 1]
    std::vector<double> weights;
};

// Gauss-Legendre rule of the given order, computed once by Newton
// iteration on the Legendre polynomial and cached.
const GaussRule& gauss_rule(int order);

double gauss_integrate(const std::function<double(double)>& f, double a, double b, int order);

// Order-doubling (7, 15, 31, ...) until two successive estimates agree to
// tol; falls back to bisection if the window order is exhausted.
double adaptive_integrate(const std::function<double(double)>& f, double a, double b, double tol,
                          int depth = 0);

}  // namespace sm
