#pragma once

#include <vector>

#include "sm/rational.hpp"

namespace sm {

// One-dimensional Bernoulli polynomials in the derivative-chain
// normalization: B_0 = 1, B_{n+1}' = B_n, and every B_{n+1} integrates to
// zero over a period. This differs from the classical polynomials by a
// factor n!.
struct BernoulliPoly {
    int degree = 0;
    RatVec coeffs;  // monomial basis on (0,1), length degree+1

    Rat eval_rat(const Rat& x) const;
    double eval(double x) const;
};

class BernoulliTable {
  public:
    explicit BernoulliTable(int max_degree = 32);

    int max_degree() const { return static_cast<int>(polys_.size()) - 1; }
    const BernoulliPoly& poly(int n) const;

    // B_n({x}); at integers the half-sum regularization applies, which is
    // the polynomial value except for n = 1 where it is 0.
    double periodized(int n, double x) const;
    Rat periodized_rat(int n, const Rat& x) const;

    // B_n(0) as an exact rational (equals B_n at every integer for n != 1).
    Rat value_at_zero(int n) const { return poly(n).coeffs[0]; }

  private:
    std::vector<BernoulliPoly> polys_;
};

// Shared immutable table, grown large enough for every caller in this
// project (expansion orders are capped well below this).
const BernoulliTable& bernoulli_table();

double bernoulli_periodized(int n, double x);

// Symmetric partial sum -sum_{0<|k|<=K} e^{2pi i k x}/(2pi i k)^n.
// Real by symmetry; converges to the periodized value for n >= 2 and at
// continuity points for n = 1.
double bernoulli_fourier_partial(int n, double x, long long K);

}  // namespace sm
