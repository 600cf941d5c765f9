#pragma once

#include <complex>
#include <memory>
#include <vector>

#include "sm/bases.hpp"
#include "sm/lattice.hpp"
#include "sm/mu.hpp"
#include "sm/scalar_field.hpp"

namespace sm {

// One term of the asymptotic expansion of the Fourier transform of
// g * chi_{simplex}: coeff * e^{-2pi i tau phase.xi} divided by
// prod (2pi i tau dir.xi)^expnt over the denominators.
struct FourierTerm {
    VIdx V;
    MIdx J;
    double coeff;  // <alpha(theta,V,J), g> = (-1)^{|I|} <mu(V,I,J), g>
    IVec phase;    // lambda_V (standard) or M lambda_V (general)
    std::vector<std::pair<IVec, int>> denominators;  // (b_k or M b_k, j_k + 1)
};

class FourierExpansion {
  public:
    int d = 0;
    int w = 0;
    double tau = 1.0;
    double prefactor = 1.0;  // tau^d |det M| for a general simplex
    std::vector<FourierTerm> terms;

    // Rejects xi outside the cone the expansion was built for.
    std::complex<double> evaluate(const std::vector<double>& xi) const;

    bool in_cone(const std::vector<double>& xi) const;

  private:
    friend FourierExpansion expand_standard(const ScalarField&, const BasisFamily&, const Theta&,
                                            int, double);
    friend FourierExpansion expand_general(const IntegerSimplex&, const ScalarField&, double,
                                           const BasisFamily&, const Theta&, int, double);
    std::shared_ptr<const BasisFamily> family_;
    std::vector<bool> theta_flags_;
    IMat mt_;  // M^t for the cone pullback; identity for the standard simplex
};

// Expansion of (g chi_{S_d})^ on the cone Q(theta), to order w; the
// coefficients are mu-functional values of g.
FourierExpansion expand_standard(const ScalarField& g, const BasisFamily& family,
                                 const Theta& theta, int w, double tol);

// Expansion of (q chi_{tau P})^ on Q_M(M theta) for P = M S_d.
FourierExpansion expand_general(const IntegerSimplex& simplex, const ScalarField& q, double tau,
                                const BasisFamily& family, const Theta& theta, int w, double tol);

// Direct oscillatory quadrature of int_{tau P} q(x) e^{-2pi i x.xi} dx,
// panel-split so each axis keeps >= 10 nodes per oscillation period.
std::complex<double> oracle_ft(const IntegerSimplex& simplex, const ScalarField& q, double tau,
                               const std::vector<double>& xi, double tol);

}  // namespace sm
