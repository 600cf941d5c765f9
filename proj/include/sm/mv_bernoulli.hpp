#pragma once

#include <complex>
#include <vector>

#include "sm/bases.hpp"
#include "sm/bernoulli1d.hpp"
#include "sm/parallel.hpp"
#include "sm/rational.hpp"

namespace sm {

// Column Hermite normal form L = H U: H lower triangular with positive
// diagonal, entries left of the diagonal reduced into [0, h_jj); U
// unimodular.
struct HnfResult {
    IMat H;
    IMat U;
};

HnfResult hnf(const IMat& L);

// Representatives of H Z^d / K Z^d for diagonal K with K Z^d <= H Z^d,
// componentwise-reduced into [0, k_s).
std::vector<IVec> cosets(const IMat& H, const IVec& k_diag);

// Basis of the saturated integer kernel lattice {n : R n = 0} for a
// full-row-rank integer matrix R, as columns.
std::vector<IVec> integer_kernel(const IMat& R, int d);

// Periodized multivariate Bernoulli polynomial evaluator for a fixed
// multi-index J and integer matrix L, with three independent backends:
// direct periodization, the HNF/coset reduction to the identity-lattice
// case, and a mollified Fourier sum over Delta(I, L).
class MvBernoulli {
  public:
    MvBernoulli(MIdx J, IMat L);

    const MIdx& J() const { return J_; }
    const BIdx& I() const { return I_; }
    const IMat& L() const { return L_; }
    const IMat& H() const { return hnf_.H; }
    const IMat& U() const { return hnf_.U; }
    const IVec& k_diag() const { return kdiag_; }
    const std::vector<IVec>& coset_reps() const { return coset_reps_; }
    long long det_l() const { return det_l_; }

    double eval_periodization(const std::vector<double>& x) const;
    double eval_hnf(const std::vector<double>& x) const;
    double eval_fourier(const std::vector<double>& x, double epsilon, long long cutoff) const;
    std::vector<double> eval_fourier_many(const std::vector<std::vector<double>>& xs, double epsilon,
                                          long long cutoff,
                                          ExecMode mode = ExecMode::Parallel) const;

    // Gaussian-tail cutoff for the mollified sum at this epsilon.
    static long long default_cutoff(double epsilon);

  private:
    MIdx J_;
    IMat L_;
    BIdx I_;
    int d_;
    long long det_l_;       // signed
    RatMat linv_t_;         // (L^{-1})^t
    IMat lt_;               // L^t (cell = L^t [0,1)^d)
    HnfResult hnf_;
    IVec kdiag_;
    std::vector<IVec> coset_reps_;
    std::vector<IVec> kernel_;  // basis of {n : (Ln)_k = 0 for i_k = 0}

    double periodization_impl(const RatVec& x, int depth) const;
};

// L_j(x, p/q) via the finite Bernoulli average; for integer p/q it reduces
// to e^{-2pi i r x} (2pi i)^j B_j(x).
std::complex<double> lerch_rational(int j, double x, long long p, long long q);

// Mollified-series definition of the same value, used as an oracle.
std::complex<double> lerch_series(int j, double x, double r, double epsilon, long long cutoff);

}  // namespace sm
