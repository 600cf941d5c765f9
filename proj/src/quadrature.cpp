#include "sm/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace sm {

ExtrapolationRule vandermonde_coeffs(int w) {
    if (w < 0) throw std::invalid_argument("vandermonde_coeffs: negative order");
    int m = w / 2 + 1;
    RatMat A(m, RatVec(m));
    RatVec rhs(m, Rat(0));
    rhs[0] = 1;
    for (int r = 0; r < m; ++r) {
        Rat node = Rat(1) / Rat(mpz_class(1) << (2 * r));  // 2^{-2r}
        Rat p(1);
        for (int c = 0; c < m; ++c) {
            A[r][c] = p;
            p *= node;
        }
    }
    ExtrapolationRule rule;
    rule.w = w;
    rule.coeffs = rat_solve(std::move(A), std::move(rhs));
    return rule;
}

double extrapolated_integral(const SimplicialComplex& P, const ScalarField& f, long long N, int w,
                             const SolidAngleMethod& method, ExecMode mode) {
    ExtrapolationRule rule = vandermonde_coeffs(w);
    double total = 0.0;
    for (int j = 0; j < rule.levels(); ++j)
        total += to_double(rule.coeffs[j]) * weighted_sum(P, f, N << j, method, mode);
    return total;
}

std::vector<ConvergenceRow> convergence_table(const SimplicialComplex& P, const ScalarField& f,
                                              const std::vector<long long>& Ns, int w,
                                              std::optional<double> reference,
                                              const SolidAngleMethod& method) {
    if (Ns.empty()) return {};
    double ref;
    if (reference) {
        ref = *reference;
    } else {
        long long nmax = *std::max_element(Ns.begin(), Ns.end());
        ref = extrapolated_integral(P, f, 2 * nmax, w + 2, method);
    }
    std::vector<ConvergenceRow> rows;
    for (long long N : Ns) {
        ConvergenceRow row;
        row.N = N;
        row.s_n = weighted_sum(P, f, N, method);
        row.extrapolated = extrapolated_integral(P, f, N, w, method);
        row.abs_error = std::abs(row.extrapolated - ref);
        row.local_order = std::numeric_limits<double>::quiet_NaN();
        rows.push_back(row);
    }
    for (size_t i = 0; i + 1 < rows.size(); ++i) {
        if (rows[i + 1].N == 2 * rows[i].N && rows[i + 1].abs_error > 0)
            rows[i].local_order = std::log2(rows[i].abs_error / rows[i + 1].abs_error);
    }
    return rows;
}

}  // namespace sm
