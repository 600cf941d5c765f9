#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace sm {

// Exact rational arithmetic. All boundary classification and coefficient
// recurrences go through Rat so that no float rounding can flip a lattice
// point across a face.
using Rat = mpq_class;

using RatVec = std::vector<Rat>;
using RatMat = std::vector<std::vector<Rat>>;

using IVec = std::vector<long long>;
using IMat = std::vector<IVec>;  // row-major

inline Rat rat_of(long long n) { return Rat(static_cast<long>(n)); }

// Doubles are dyadic rationals; the conversion is exact.
inline Rat rat_from_double(double x) {
    Rat q;
    mpq_set_d(q.get_mpq_t(), x);
    return q;
}

inline double to_double(const Rat& q) { return q.get_d(); }

inline RatVec rat_vec(const std::vector<double>& x) {
    RatVec v(x.size());
    for (size_t i = 0; i < x.size(); ++i) v[i] = rat_from_double(x[i]);
    return v;
}

inline RatMat rat_mat(const IMat& m) {
    RatMat r(m.size());
    for (size_t i = 0; i < m.size(); ++i) {
        r[i].resize(m[i].size());
        for (size_t j = 0; j < m[i].size(); ++j) r[i][j] = rat_of(m[i][j]);
    }
    return r;
}

inline RatMat rat_identity(size_t d) {
    RatMat id(d, RatVec(d, Rat(0)));
    for (size_t i = 0; i < d; ++i) id[i][i] = 1;
    return id;
}

inline IMat int_identity(size_t d) {
    IMat id(d, IVec(d, 0));
    for (size_t i = 0; i < d; ++i) id[i][i] = 1;
    return id;
}

inline Rat rat_dot(const RatVec& a, const RatVec& b) {
    Rat s(0);
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline RatVec rat_mat_vec(const RatMat& A, const RatVec& x) {
    RatVec y(A.size(), Rat(0));
    for (size_t i = 0; i < A.size(); ++i)
        for (size_t j = 0; j < x.size(); ++j) y[i] += A[i][j] * x[j];
    return y;
}

inline RatMat rat_mat_mul(const RatMat& A, const RatMat& B) {
    size_t n = A.size(), m = B[0].size(), k = B.size();
    RatMat C(n, RatVec(m, Rat(0)));
    for (size_t i = 0; i < n; ++i)
        for (size_t l = 0; l < k; ++l)
            for (size_t j = 0; j < m; ++j) C[i][j] += A[i][l] * B[l][j];
    return C;
}

inline RatMat rat_transpose(const RatMat& A) {
    size_t n = A.size(), m = A[0].size();
    RatMat T(m, RatVec(n));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < m; ++j) T[j][i] = A[i][j];
    return T;
}

// Gauss-Jordan inverse; throws on singular input.
inline RatMat rat_inverse(RatMat A) {
    size_t n = A.size();
    RatMat inv = rat_identity(n);
    for (size_t col = 0; col < n; ++col) {
        size_t piv = col;
        while (piv < n && A[piv][col] == 0) ++piv;
        if (piv == n) throw std::invalid_argument("rat_inverse: singular matrix");
        std::swap(A[piv], A[col]);
        std::swap(inv[piv], inv[col]);
        Rat p = A[col][col];
        for (size_t j = 0; j < n; ++j) {
            A[col][j] /= p;
            inv[col][j] /= p;
        }
        for (size_t r = 0; r < n; ++r) {
            if (r == col || A[r][col] == 0) continue;
            Rat f = A[r][col];
            for (size_t j = 0; j < n; ++j) {
                A[r][j] -= f * A[col][j];
                inv[r][j] -= f * inv[col][j];
            }
        }
    }
    return inv;
}

inline size_t rat_rank(RatMat A) {
    if (A.empty()) return 0;
    size_t rows = A.size(), cols = A[0].size(), rank = 0;
    for (size_t col = 0; col < cols && rank < rows; ++col) {
        size_t piv = rank;
        while (piv < rows && A[piv][col] == 0) ++piv;
        if (piv == rows) continue;
        std::swap(A[piv], A[rank]);
        for (size_t r = 0; r < rows; ++r) {
            if (r == rank || A[r][col] == 0) continue;
            Rat f = A[r][col] / A[rank][col];
            for (size_t j = col; j < cols; ++j) A[r][j] -= f * A[rank][j];
        }
        ++rank;
    }
    return rank;
}

// Solves A x = b exactly; throws on singular A.
inline RatVec rat_solve(RatMat A, RatVec b) {
    size_t n = A.size();
    for (size_t col = 0; col < n; ++col) {
        size_t piv = col;
        while (piv < n && A[piv][col] == 0) ++piv;
        if (piv == n) throw std::invalid_argument("rat_solve: singular matrix");
        std::swap(A[piv], A[col]);
        std::swap(b[piv], b[col]);
        Rat p = A[col][col];
        for (size_t j = col; j < n; ++j) A[col][j] /= p;
        b[col] /= p;
        for (size_t r = 0; r < n; ++r) {
            if (r == col || A[r][col] == 0) continue;
            Rat f = A[r][col];
            for (size_t j = col; j < n; ++j) A[r][j] -= f * A[col][j];
            b[r] -= f * b[col];
        }
    }
    return b;
}

inline Rat rat_det(RatMat A) {
    size_t n = A.size();
    Rat det(1);
    for (size_t col = 0; col < n; ++col) {
        size_t piv = col;
        while (piv < n && A[piv][col] == 0) ++piv;
        if (piv == n) return Rat(0);
        if (piv != col) {
            std::swap(A[piv], A[col]);
            det = -det;
        }
        det *= A[col][col];
        for (size_t r = col + 1; r < n; ++r) {
            if (A[r][col] == 0) continue;
            Rat f = A[r][col] / A[col][col];
            for (size_t j = col; j < n; ++j) A[r][j] -= f * A[col][j];
        }
    }
    return det;
}

inline long long int_det(const IMat& m) {
    Rat d = rat_det(rat_mat(m));
    if (d.get_den() != 1) throw std::logic_error("int_det: non-integer determinant");
    if (!d.get_num().fits_slong_p()) throw std::overflow_error("int_det: overflow");
    return d.get_num().get_si();
}

inline IVec int_mat_vec(const IMat& A, const IVec& x) {
    IVec y(A.size(), 0);
    for (size_t i = 0; i < A.size(); ++i)
        for (size_t j = 0; j < x.size(); ++j) y[i] += A[i][j] * x[j];
    return y;
}

inline IMat int_mat_mul(const IMat& A, const IMat& B) {
    size_t n = A.size(), m = B[0].size(), k = B.size();
    IMat C(n, IVec(m, 0));
    for (size_t i = 0; i < n; ++i)
        for (size_t l = 0; l < k; ++l)
            for (size_t j = 0; j < m; ++j) C[i][j] += A[i][l] * B[l][j];
    return C;
}

inline IMat int_transpose(const IMat& A) {
    size_t n = A.size(), m = A[0].size();
    IMat T(m, IVec(n));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < m; ++j) T[j][i] = A[i][j];
    return T;
}

}  // namespace sm
