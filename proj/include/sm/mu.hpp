#pragma once

#include <vector>

#include "sm/bases.hpp"
#include "sm/rational.hpp"
#include "sm/scalar_field.hpp"

namespace sm {

// One summand of an intermediate function produced by the chain
// T_d, T_{d-1}, ..., T_1: coeff * Integral over the dilated slot simplex
// of (d^alpha g)(A u + b), where u = (x_1..x_h, s_1..s_m) stacks the
// surviving variables and the pending integration slots in creation
// order. The slot domain is {s >= 0, sum s <= 1 - sum x}; differentiating
// in a surviving variable produces the boundary term of the first-created
// slot plus the chain-rule terms, which keeps the family closed.
struct RestrictedTerm {
    Rat coeff;
    MIdx alpha;  // derivative multi-index on the base field
    RatMat A;    // dim(g) rows, h + m columns
    RatVec b;
    int h = 0;  // surviving variables
    int m = 0;  // pending slots

    // d/dx_k for k in [0, h); appends the resulting terms.
    void differentiate(int k, std::vector<RestrictedTerm>& out) const;

    RestrictedTerm integrated_last() const;       // x_h becomes a new slot
    RestrictedTerm restricted_zero() const;       // x_h := 0
    // x_h := 1 - (x_1 + ... + x_{h-1}); empty when pending slots collapse.
    bool restrict_upper(RestrictedTerm& out) const;
};

struct MuFunctional {
    VIdx V;
    BIdx I;
    MIdx J;

    MuFunctional(VIdx v, BIdx i, MIdx j);
    int dim() const { return static_cast<int>(V.size()); }
};

// One step T_h^{v,i,j} applied to terms living on R^h.
std::vector<RestrictedTerm> apply_T(int h, int v, int i, int j,
                                    std::vector<RestrictedTerm> terms);

// The symbolic term list of mu applied to a d-dimensional field (before
// quadrature); exposed for tests.
std::vector<RestrictedTerm> mu_terms(const MuFunctional& mu);

// <mu(V,I,J), g>: apply T_d ... T_1 symbolically, then evaluate the
// pending integrals by nested Gauss-Legendre with order doubling until
// successive estimates differ by less than tol.
double apply_mu(const MuFunctional& mu, const ScalarField& g, double tol);

// false iff the functional is identically zero: some (v_h, i_h) = (2, 0).
bool mu_support_filter(const MuFunctional& mu);

double default_mu_tol(int d);

}  // namespace sm
