#pragma once

#include <optional>
#include <vector>

#include "sm/lattice.hpp"
#include "sm/rational.hpp"
#include "sm/scalar_field.hpp"

namespace sm {

// Richardson weights c_0..c_{floor(w/2)} killing the N^{-2k} terms of the
// weighted-sum asymptotics; exact rationals from the Vandermonde system in
// the nodes 1, 2^{-2}, 2^{-4}, ...
struct ExtrapolationRule {
    int w = 0;
    std::vector<Rat> coeffs;

    int levels() const { return static_cast<int>(coeffs.size()); }
};

ExtrapolationRule vandermonde_coeffs(int w);

// sum_j c_j S_{2^j N}(f, P) = integral + O(N^{-w-1}).
double extrapolated_integral(const SimplicialComplex& P, const ScalarField& f, long long N, int w,
                             const SolidAngleMethod& method = {},
                             ExecMode mode = ExecMode::Parallel);

struct ConvergenceRow {
    long long N = 0;
    double s_n = 0.0;
    double extrapolated = 0.0;
    double abs_error = 0.0;
    double local_order = 0.0;  // log2(err(N)/err(2N)); NaN on the last row
};

// Reference integral: supplied, or computed by extrapolation at order w+2
// from 2*max(Ns).
std::vector<ConvergenceRow> convergence_table(const SimplicialComplex& P, const ScalarField& f,
                                              const std::vector<long long>& Ns, int w,
                                              std::optional<double> reference = std::nullopt,
                                              const SolidAngleMethod& method = {});

}  // namespace sm
