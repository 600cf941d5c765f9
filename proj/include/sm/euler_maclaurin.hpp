#pragma once

#include <vector>

#include "sm/bases.hpp"
#include "sm/lattice.hpp"
#include "sm/mu.hpp"
#include "sm/mv_bernoulli.hpp"
#include "sm/scalar_field.hpp"

namespace sm {

struct ExpansionTerm {
    VIdx V;
    BIdx I;
    MIdx J;
    int tau_power = 0;            // d - |I| - |J|
    double mu_coeff = 0.0;        // <mu(V,I,J), q_{tau,M}>
    double bernoulli_factor = 0.0;
    double contribution = 0.0;    // det * tau^power * mu * bernoulli
};

struct ExpansionReport {
    std::vector<ExpansionTerm> main_terms;
    double total = 0.0;
    double lhs_bruteforce = 0.0;
    double residual = 0.0;  // lhs - total, always reported
};

// Mordell's expansion on an interval: the lattice sum against
// omega_{[a,b]}, the boundary Bernoulli series to order w, and the
// residual against the brute-force side.
ExpansionReport mordell_expand_1d(const ScalarField& q, double a, double b, double x, int w);

// The main expansion of sum_n omega_{tau P}(x+n) q(x+n) for a simplex
// P = p + M S_d, assembled over (V, I, J <= I, |J| <= w) with pruning, the
// Bernoulli factors evaluated through the HNF backend, and the brute-force
// left-hand side enumerated with exact solid angles.
ExpansionReport expand_main(const IntegerSimplex& simplex, const ScalarField& q, double tau,
                            const std::vector<double>& x, int w, double mu_tol = 0.0,
                            const SolidAngleMethod& method = {});

// gamma_k (0 < k <= w/2) of Thm-style quadrature asymptotics for a single
// simplex with base point p, or summed over a complex by additivity.
std::vector<double> gamma_coefficients(const IntegerSimplex& simplex, const ScalarField& f, int w,
                                       double mu_tol = 0.0);
std::vector<double> gamma_coefficients(const SimplicialComplex& P, const ScalarField& f, int w,
                                       double mu_tol = 0.0);

int max_expansion_order(int d);  // cap: 8 for d<=2, 6 for d=3

}  // namespace sm
