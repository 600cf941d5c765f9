#include "sm/bernoulli1d.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

namespace sm {

Rat BernoulliPoly::eval_rat(const Rat& x) const {
    Rat acc(0);
    for (int k = degree; k >= 0; --k) acc = acc * x + coeffs[k];
    return acc;
}

double BernoulliPoly::eval(double x) const {
    double acc = 0.0;
    for (int k = degree; k >= 0; --k) acc = acc * x + to_double(coeffs[k]);
    return acc;
}

BernoulliTable::BernoulliTable(int max_degree) {
    polys_.resize(max_degree + 1);
    polys_[0] = {0, {Rat(1)}};
    for (int n = 0; n < max_degree; ++n) {
        // Antiderivative of B_n, constant fixed by zero mean on [0,1].
        BernoulliPoly next;
        next.degree = n + 1;
        next.coeffs.assign(n + 2, Rat(0));
        for (int k = 0; k <= n; ++k) next.coeffs[k + 1] = polys_[n].coeffs[k] / (k + 1);
        Rat mean(0);
        for (int k = 1; k <= n + 1; ++k) mean += next.coeffs[k] / (k + 1);
        next.coeffs[0] = -mean;
        polys_[n + 1] = std::move(next);
    }
}

const BernoulliPoly& BernoulliTable::poly(int n) const {
    if (n < 0 || n > max_degree()) throw std::invalid_argument("BernoulliTable: degree out of range");
    return polys_[n];
}

double BernoulliTable::periodized(int n, double x) const {
    double f = x - std::floor(x);
    // Detect integer arguments exactly: only B_1 jumps there.
    if (f == 0.0) return n == 1 ? 0.0 : poly(n).eval(0.0);
    return poly(n).eval(f);
}

Rat BernoulliTable::periodized_rat(int n, const Rat& x) const {
    Rat f = x;
    mpz_class fl;
    mpz_fdiv_q(fl.get_mpz_t(), x.get_num().get_mpz_t(), x.get_den().get_mpz_t());
    f -= Rat(fl);
    if (f == 0) return n == 1 ? Rat(0) : poly(n).coeffs[0];
    return poly(n).eval_rat(f);
}

const BernoulliTable& bernoulli_table() {
    static const BernoulliTable table(40);
    return table;
}

double bernoulli_periodized(int n, double x) { return bernoulli_table().periodized(n, x); }

double bernoulli_fourier_partial(int n, double x, long long K) {
    if (n < 1) throw std::invalid_argument("bernoulli_fourier_partial: n must be >= 1");
    // Pair k with -k: the sum collapses to twice the real part.
    const double two_pi = 2.0 * M_PI;
    std::complex<double> acc(0.0, 0.0);
    for (long long k = 1; k <= K; ++k) {
        std::complex<double> denom = std::pow(std::complex<double>(0.0, two_pi * k), n);
        acc += std::exp(std::complex<double>(0.0, two_pi * k * x)) / denom;
    }
    return -2.0 * acc.real();
}

}  // namespace sm
