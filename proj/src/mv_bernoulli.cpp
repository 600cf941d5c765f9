#include "sm/mv_bernoulli.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace sm {

namespace {

// Column operations on A mirrored as inverse row operations on U keep
// A0 = A * U invariant.
struct ColumnReducer {
    IMat A;
    IMat U;

    void swap_cols(int i, int j) {
        for (auto& row : A) std::swap(row[i], row[j]);
        std::swap(U[i], U[j]);
    }
    void negate_col(int i) {
        for (auto& row : A) row[i] = -row[i];
        for (auto& u : U[i]) u = -u;
    }
    // col_j += q * col_i
    void add_col(int j, long long q, int i) {
        for (auto& row : A) row[j] += q * row[i];
        for (size_t c = 0; c < U[i].size(); ++c) U[i][c] -= q * U[j][c];
    }
};

}  // namespace

HnfResult hnf(const IMat& L) {
    int d = static_cast<int>(L.size());
    if (int_det(L) == 0) throw std::invalid_argument("hnf: singular matrix");
    ColumnReducer cr{L, int_identity(d)};
    for (int r = 0; r < d; ++r) {
        // Euclid across columns r..d-1 on row r.
        for (;;) {
            int piv = -1;
            for (int c = r; c < d; ++c)
                if (cr.A[r][c] != 0 && (piv == -1 || std::llabs(cr.A[r][c]) < std::llabs(cr.A[r][piv])))
                    piv = c;
            if (piv == -1) throw std::logic_error("hnf: zero row in nonsingular matrix");
            if (piv != r) cr.swap_cols(r, piv);
            bool done = true;
            for (int c = r + 1; c < d; ++c) {
                if (cr.A[r][c] == 0) continue;
                long long q = cr.A[r][c] / cr.A[r][r];
                cr.add_col(c, -q, r);
                if (cr.A[r][c] != 0) done = false;
            }
            if (done) break;
        }
        if (cr.A[r][r] < 0) cr.negate_col(r);
        // Reduce the entries left of the diagonal into [0, h_rr).
        for (int c = 0; c < r; ++c) {
            long long q = cr.A[r][c] / cr.A[r][r];
            if (cr.A[r][c] - q * cr.A[r][r] < 0) --q;
            if (q != 0) cr.add_col(c, -q, r);
        }
    }
    return {cr.A, cr.U};
}

std::vector<IVec> cosets(const IMat& H, const IVec& k_diag) {
    int d = static_cast<int>(H.size());
    // Subgroup check: every K e_j must be an integer combination of the
    // columns of H.
    RatMat hinv = rat_inverse(rat_mat(H));
    for (int j = 0; j < d; ++j) {
        RatVec rhs(d, Rat(0));
        rhs[j] = rat_of(k_diag[j]);
        RatVec sol = rat_mat_vec(hinv, rhs);
        for (const auto& s : sol)
            if (s.get_den() != 1) throw std::logic_error("cosets: K Z^d not inside H Z^d");
    }

    long long det_k = 1, det_h = 1;
    for (int j = 0; j < d; ++j) {
        det_k *= k_diag[j];
        det_h *= H[j][j];
    }
    long long expected = det_k / det_h;

    std::set<IVec> reps;
    IVec m(d, 0);
    for (;;) {
        IVec v = int_mat_vec(H, m);
        for (int s = 0; s < d; ++s) {
            v[s] %= k_diag[s];
            if (v[s] < 0) v[s] += k_diag[s];
        }
        reps.insert(std::move(v));
        int axis = 0;
        while (axis < d && ++m[axis] == k_diag[axis]) m[axis++] = 0;
        if (axis == d) break;
    }
    if (static_cast<long long>(reps.size()) != expected)
        throw std::logic_error("cosets: representative count mismatch");
    return {reps.begin(), reps.end()};
}

std::vector<IVec> integer_kernel(const IMat& R, int d) {
    int m = static_cast<int>(R.size());
    if (m == 0) {
        std::vector<IVec> basis;
        for (int j = 0; j < d; ++j) {
            IVec e(d, 0);
            e[j] = 1;
            basis.push_back(std::move(e));
        }
        return basis;
    }
    // Column-reduce R to [T | 0] with a unimodular W; the trailing columns
    // of W span the saturated kernel lattice.
    IMat A = R;
    IMat W = int_identity(d);
    auto add_col = [&](int j, long long q, int i) {
        for (auto& row : A) row[j] += q * row[i];
        for (auto& row : W) row[j] += q * row[i];
    };
    auto swap_cols = [&](int i, int j) {
        for (auto& row : A) std::swap(row[i], row[j]);
        for (auto& row : W) std::swap(row[i], row[j]);
    };
    int rank = 0;
    for (int r = 0; r < m; ++r) {
        for (;;) {
            int piv = -1;
            for (int c = rank; c < d; ++c)
                if (A[r][c] != 0 && (piv == -1 || std::llabs(A[r][c]) < std::llabs(A[r][piv])))
                    piv = c;
            if (piv == -1) break;
            if (piv != rank) swap_cols(rank, piv);
            bool done = true;
            for (int c = rank + 1; c < d; ++c) {
                if (A[r][c] == 0) continue;
                long long q = A[r][c] / A[r][rank];
                add_col(c, -q, rank);
                if (A[r][c] != 0) done = false;
            }
            if (done) break;
        }
        bool pivoted = false;
        for (int c = rank; c < d; ++c) pivoted = pivoted || A[r][c] != 0;
        if (pivoted) ++rank;
    }
    std::vector<IVec> basis;
    for (int c = rank; c < d; ++c) {
        IVec col(d);
        for (int i = 0; i < d; ++i) col[i] = W[i][c];
        basis.push_back(std::move(col));
    }
    return basis;
}

MvBernoulli::MvBernoulli(MIdx J, IMat L) : J_(std::move(J)), L_(std::move(L)) {
    d_ = static_cast<int>(J_.size());
    if (static_cast<int>(L_.size()) != d_)
        throw std::invalid_argument("MvBernoulli: J and L dimension mismatch");
    for (int j : J_)
        if (j < 0) throw std::invalid_argument("MvBernoulli: negative multi-index");
    det_l_ = int_det(L_);
    if (det_l_ == 0) throw std::invalid_argument("MvBernoulli: singular L");
    I_.resize(d_);
    for (int k = 0; k < d_; ++k) I_[k] = J_[k] > 0 ? 1 : 0;
    linv_t_ = rat_transpose(rat_inverse(rat_mat(L_)));
    lt_ = int_transpose(L_);
    hnf_ = hnf(L_);
    kdiag_.resize(d_);
    for (int j = 0; j < d_; ++j) {
        long long prod = 1;
        for (int s = j; s < d_; ++s) prod *= hnf_.H[s][s];
        kdiag_[j] = prod;
    }
    coset_reps_ = cosets(hnf_.H, kdiag_);
    IMat zero_rows;
    for (int k = 0; k < d_; ++k)
        if (I_[k] == 0) zero_rows.push_back(L_[k]);
    kernel_ = integer_kernel(zero_rows, d_);
}

namespace {

bool rat_is_integer(const Rat& q) { return q.get_den() == 1; }

double rat_fraction_to_double(const Rat& q) {
    mpz_class fl;
    mpz_fdiv_q(fl.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
    Rat f = q - Rat(fl);
    return to_double(f);
}

// Periodized B_n with the integer case resolved exactly.
double periodized_exact(int n, const Rat& x) {
    const BernoulliTable& table = bernoulli_table();
    if (rat_is_integer(x)) return n == 1 ? 0.0 : to_double(table.value_at_zero(n));
    return table.poly(n).eval(rat_fraction_to_double(x));
}

}  // namespace

double MvBernoulli::periodization_impl(const RatVec& x, int depth) const {
    // Summands live on the cell L^t [0,1)^d; enumerate the integer
    // translates whose cell contains x.
    RatVec lo(d_), hi(d_);
    for (int corner = 0; corner < (1 << d_); ++corner) {
        RatVec pt(d_, Rat(0));
        for (int j = 0; j < d_; ++j)
            if (corner >> j & 1)
                for (int i = 0; i < d_; ++i) pt[i] += rat_of(lt_[i][j]);
        for (int i = 0; i < d_; ++i) {
            Rat c = pt[i] - x[i];
            if (corner == 0 || c < lo[i]) lo[i] = c;
            if (corner == 0 || c > hi[i]) hi[i] = c;
        }
    }
    IVec nlo(d_), nhi(d_);
    for (int i = 0; i < d_; ++i) {
        mpz_class fl, ce;
        mpz_fdiv_q(fl.get_mpz_t(), lo[i].get_num().get_mpz_t(), lo[i].get_den().get_mpz_t());
        mpz_cdiv_q(ce.get_mpz_t(), hi[i].get_num().get_mpz_t(), hi[i].get_den().get_mpz_t());
        nlo[i] = fl.get_si();
        nhi[i] = ce.get_si();
    }

    const BernoulliTable& table = bernoulli_table();
    double inv_det = 1.0 / std::abs(static_cast<double>(det_l_));
    double total = 0.0;
    bool on_wall = false;
    IVec n = nlo;
    for (;;) {
        RatVec shifted(d_);
        for (int i = 0; i < d_; ++i) shifted[i] = x[i] + rat_of(n[i]);
        RatVec y = rat_mat_vec(linv_t_, shifted);
        bool in_closed = true, in_half_open = true, boundary = false;
        for (int k = 0; k < d_; ++k) {
            if (y[k] < 0 || y[k] > 1) {
                in_closed = false;
                break;
            }
            if (y[k] == 0 || y[k] == 1) boundary = true;
            if (y[k] == 1) in_half_open = false;
        }
        if (in_closed) {
            if (boundary) on_wall = true;
            if (in_half_open) {
                double prod = inv_det;
                for (int k = 0; k < d_; ++k) prod *= table.poly(J_[k]).eval(to_double(y[k]));
                total += prod;
            }
        }
        int axis = 0;
        while (axis < d_ && ++n[axis] > nhi[axis]) n[axis++] = nlo[axis];
        if (axis == d_) break;
    }

    if (on_wall && depth < 3) {
        // Regularized value: average over the 2d axis probes.
        const Rat delta = rat_from_double(1e-6);
        double acc = 0.0;
        for (int i = 0; i < d_; ++i) {
            for (int sign = -1; sign <= 1; sign += 2) {
                RatVec probe = x;
                probe[i] += sign > 0 ? delta : -delta;
                acc += periodization_impl(probe, depth + 1);
            }
        }
        return acc / (2.0 * d_);
    }
    return total;
}

double MvBernoulli::eval_periodization(const std::vector<double>& x) const {
    return periodization_impl(rat_vec(x), 0);
}

double MvBernoulli::eval_hnf(const std::vector<double>& x) const {
    RatVec y = rat_mat_vec(linv_t_, rat_vec(x));
    const double two_pi = 2.0 * M_PI;
    std::complex<double> total(0.0, 0.0);
    for (const auto& v : coset_reps_) {
        std::complex<double> prod(1.0, 0.0);
        bool dead = false;
        for (int s = 0; s < d_ && !dead; ++s) {
            if (I_[s] == 0) {
                // The coset contributes only if the zero-frequency
                // constraint v_s + k_s m_s = 0 is solvable.
                if (v[s] % kdiag_[s] != 0) dead = true;
                continue;
            }
            long long k = kdiag_[s];
            std::complex<double> factor(0.0, 0.0);
            for (long long a = 0; a < k; ++a) {
                double angle = -two_pi * static_cast<double>(a) * static_cast<double>(v[s]) /
                               static_cast<double>(k);
                Rat arg = y[s] + Rat(static_cast<long>(a), static_cast<long>(k));
                factor += std::polar(periodized_exact(J_[s], arg), angle);
            }
            prod *= factor / static_cast<double>(k);
        }
        if (!dead) total += prod;
    }
    if (std::abs(total.imag()) > 1e-10 * std::max(1.0, std::abs(total.real())))
        throw std::runtime_error("MvBernoulli::eval_hnf: residual imaginary part");
    return total.real();
}

long long MvBernoulli::default_cutoff(double epsilon) {
    return static_cast<long long>(std::ceil(1.8 / epsilon));
}

std::vector<double> MvBernoulli::eval_fourier_many(const std::vector<std::vector<double>>& xs,
                                                   double epsilon, long long cutoff,
                                                   ExecMode mode) const {
    if (cutoff <= 0) cutoff = default_cutoff(epsilon);
    int r = static_cast<int>(kernel_.size());
    size_t np = xs.size();
    std::vector<double> out(np, 0.0);
    int abs_j = midx_order(J_);

    if (r == 0) {
        // Delta(I, L) = {0} when I = 0.
        for (size_t p = 0; p < np; ++p) out[p] = 1.0;
        return out;
    }

    // Coefficient bounds: c = G n with G the rational left inverse of the
    // kernel basis.
    RatMat B(d_, RatVec(r));
    for (int i = 0; i < d_; ++i)
        for (int c = 0; c < r; ++c) B[i][c] = rat_of(kernel_[c][i]);
    RatMat Bt = rat_transpose(B);
    RatMat G = rat_mat_mul(rat_inverse(rat_mat_mul(Bt, B)), Bt);
    std::vector<long long> cbound(r);
    for (int i = 0; i < r; ++i) {
        Rat row_norm(0);
        for (int j = 0; j < d_; ++j) row_norm += abs(G[i][j]);
        cbound[i] = static_cast<long long>(std::ceil(to_double(row_norm) * cutoff)) + 1;
    }

    // Ln is linear in the coefficients.
    std::vector<IVec> lkernel(r);
    for (int c = 0; c < r; ++c) lkernel[c] = int_mat_vec(L_, kernel_[c]);

    // Per-axis phase tables: n.x = sum_i c_i (b_i . x).
    const double two_pi = 2.0 * M_PI;
    std::vector<std::vector<std::vector<std::complex<double>>>> phase(r);
    for (int i = 0; i < r; ++i) {
        phase[i].resize(np);
        for (size_t p = 0; p < np; ++p) {
            double bx = 0.0;
            for (int j = 0; j < d_; ++j) bx += static_cast<double>(kernel_[i][j]) * xs[p][j];
            auto& tab = phase[i][p];
            tab.resize(2 * cbound[i] + 1);
            for (long long c = -cbound[i]; c <= cbound[i]; ++c)
                tab[c + cbound[i]] = std::polar(1.0, two_pi * static_cast<double>(c) * bx);
        }
    }

    // Character constant: every term is a real coefficient times
    // (-1)^{|I|} i^{-|J|}.
    int ii = midx_order(I_);
    std::complex<double> character = std::pow(std::complex<double>(0.0, 1.0), -abs_j);
    if (ii % 2) character = -character;

    long long rows = 1;
    for (int i = 1; i < r; ++i) rows *= 2 * cbound[i] + 1;
    long long row_len = 2 * cbound[0] + 1;
    double eps2pi = M_PI * epsilon * epsilon;

    // The real coefficient row along axis 0 is shared by all points; the
    // per-point work is one dot product against the phase table. Rows are
    // processed in a fixed order and each point is owned by one thread, so
    // the result does not depend on the thread count.
    std::vector<double> coeff_row(row_len);
    std::vector<std::complex<double>> acc(np, {0.0, 0.0});
    std::vector<long long> cidx(r, 0);
#ifdef _OPENMP
    bool parallel = mode == ExecMode::Parallel && effective_threads() > 1;
#else
    bool parallel = false;
#endif
    for (long long row = 0; row < rows; ++row) {
        long long rem = row;
        IVec base_n(d_, 0), base_ln(d_, 0);
        for (int i = 1; i < r; ++i) {
            long long ci = rem % (2 * cbound[i] + 1) - cbound[i];
            cidx[i] = ci;
            rem /= 2 * cbound[i] + 1;
            for (int j = 0; j < d_; ++j) {
                base_n[j] += ci * kernel_[i][j];
                base_ln[j] += ci * lkernel[i][j];
            }
        }
        auto fill_coeff = [&](long long t) {
            long long c0 = t - cbound[0];
            long long ninf = 0;
            double n2 = 0.0;
            IVec ln(d_);
            for (int j = 0; j < d_; ++j) {
                long long nj = base_n[j] + c0 * kernel_[0][j];
                ninf = std::max(ninf, std::llabs(nj));
                n2 += static_cast<double>(nj) * static_cast<double>(nj);
                ln[j] = base_ln[j] + c0 * lkernel[0][j];
            }
            if (ninf > cutoff) {
                coeff_row[t] = 0.0;
                return;
            }
            for (int k = 0; k < d_; ++k)
                if (I_[k] == 1 && ln[k] == 0) {  // not in Delta
                    coeff_row[t] = 0.0;
                    return;
                }
            double v = std::exp(-eps2pi * n2);
            for (int k = 0; k < d_; ++k)
                if (J_[k] > 0) v /= std::pow(two_pi * static_cast<double>(ln[k]), J_[k]);
            coeff_row[t] = v;
        };
        auto accumulate_point = [&](size_t p) {
            std::complex<double> dotp(0.0, 0.0);
            const auto& tab0 = phase[0][p];
            for (long long t = 0; t < row_len; ++t)
                if (coeff_row[t] != 0.0) dotp += coeff_row[t] * tab0[t];
            std::complex<double> mult(1.0, 0.0);
            for (int i = 1; i < r; ++i) mult *= phase[i][p][cidx[i] + cbound[i]];
            acc[p] += dotp * mult;
        };
        if (parallel) {
#ifdef _OPENMP
#pragma omp parallel num_threads(effective_threads())
            {
#pragma omp for schedule(static)
                for (long long t = 0; t < row_len; ++t) fill_coeff(t);
#pragma omp for schedule(static)
                for (long long p = 0; p < static_cast<long long>(np); ++p)
                    accumulate_point(static_cast<size_t>(p));
            }
#endif
        } else {
            for (long long t = 0; t < row_len; ++t) fill_coeff(t);
            for (size_t p = 0; p < np; ++p) accumulate_point(p);
        }
    }
    for (size_t p = 0; p < np; ++p) out[p] = (character * acc[p]).real();
    return out;
}

double MvBernoulli::eval_fourier(const std::vector<double>& x, double epsilon,
                                 long long cutoff) const {
    return eval_fourier_many({x}, epsilon, cutoff)[0];
}

std::complex<double> lerch_rational(int j, double x, long long p, long long q) {
    if (q < 1) throw std::invalid_argument("lerch_rational: q must be >= 1");
    if (j < 1) throw std::invalid_argument("lerch_rational: j must be >= 1");
    const double two_pi = 2.0 * M_PI;
    const BernoulliTable& table = bernoulli_table();
    std::complex<double> sum(0.0, 0.0);
    Rat xr = rat_from_double(x);
    for (long long a = 0; a < q; ++a) {
        Rat arg = (xr + rat_of(a)) / rat_of(q);
        double b = periodized_exact(j, arg);
        sum += std::polar(b, -two_pi * static_cast<double>(a) * static_cast<double>(p) /
                                 static_cast<double>(q));
    }
    sum /= static_cast<double>(q);
    // (2 pi i q)^j e^{-2 pi i x p / q}
    std::complex<double> front =
        std::pow(std::complex<double>(0.0, two_pi * static_cast<double>(q)), j) *
        std::polar(1.0, -two_pi * x * static_cast<double>(p) / static_cast<double>(q));
    return front * sum;
}

std::complex<double> lerch_series(int j, double x, double r, double epsilon, long long cutoff) {
    // -lim sum_{n != -r} eta_hat(eps (n+r)) e^{2 pi i n x} / (n+r)^j
    std::complex<double> acc(0.0, 0.0);
    const double two_pi = 2.0 * M_PI;
    for (long long n = -cutoff; n <= cutoff; ++n) {
        double t = static_cast<double>(n) + r;
        if (t == 0.0) continue;
        double w = std::exp(-M_PI * epsilon * epsilon * t * t);
        acc += w * std::polar(1.0, two_pi * static_cast<double>(n) * x) / std::pow(t, j);
    }
    return -acc;
}

}  // namespace sm
