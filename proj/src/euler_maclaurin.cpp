#include "sm/euler_maclaurin.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

#include "sm/gauss.hpp"
#include "sm/parallel.hpp"

namespace sm {

ExpansionReport mordell_expand_1d(const ScalarField& q, double a, double b, double x, int w) {
    if (!(a < b)) throw std::invalid_argument("mordell_expand_1d: requires a < b");
    if (q.dim() != 1) throw std::invalid_argument("mordell_expand_1d: field must be 1-dimensional");

    ExpansionReport rep;

    // Brute-force side: omega_{[a,b]} weights with exact endpoint checks.
    Rat ar = rat_from_double(a), br = rat_from_double(b), xr = rat_from_double(x);
    long long nlo = static_cast<long long>(std::floor(a - x)) - 1;
    long long nhi = static_cast<long long>(std::ceil(b - x)) + 1;
    double lhs = 0.0;
    for (long long n = nlo; n <= nhi; ++n) {
        Rat pt = xr + rat_of(n);
        if (pt < ar || pt > br) continue;
        double wgt = (pt == ar || pt == br) ? 0.5 : 1.0;
        double y = to_double(pt);
        lhs += wgt * q.eval(std::span<const double>(&y, 1));
    }
    rep.lhs_bruteforce = lhs;

    // Integral term.
    ExprPtr expr = q.expr();
    double integral =
        adaptive_integrate([&](double t) { return expr_eval(expr, std::span<const double>(&t, 1)); },
                           a, b, 1e-14);
    ExpansionTerm integral_term;
    integral_term.J = {0};
    integral_term.mu_coeff = integral;
    integral_term.bernoulli_factor = 1.0;
    integral_term.contribution = integral;
    rep.main_terms.push_back(integral_term);
    double total = integral;

    // Boundary terms q^(j)(b) B_{j+1}(x-b) - q^(j)(a) B_{j+1}(x-a).
    for (int j = 0; j <= w; ++j) {
        MIdx alpha{j};
        double qa = q.eval_partial(alpha, std::span<const double>(&a, 1));
        double qb = q.eval_partial(alpha, std::span<const double>(&b, 1));
        double contrib = qb * bernoulli_periodized(j + 1, x - b) - qa * bernoulli_periodized(j + 1, x - a);
        ExpansionTerm term;
        term.J = {j};
        term.mu_coeff = qb;  // the b-side coefficient; both sides folded into contribution
        term.bernoulli_factor = bernoulli_periodized(j + 1, x - b);
        term.contribution = contrib;
        rep.main_terms.push_back(term);
        total += contrib;
    }
    rep.total = total;
    rep.residual = rep.lhs_bruteforce - rep.total;
    return rep;
}

int max_expansion_order(int d) { return d <= 2 ? 8 : 6; }

namespace {

// All J with support contained in supp(I) and |J| <= w.
std::vector<MIdx> dominated_j(const BIdx& I, int w) {
    int d = static_cast<int>(I.size());
    std::vector<int> support;
    for (int k = 0; k < d; ++k)
        if (I[k] == 1) support.push_back(k);
    std::vector<MIdx> out;
    MIdx j(d, 0);
    std::function<void(size_t, int)> rec = [&](size_t pos, int budget) {
        if (pos == support.size()) {
            out.push_back(j);
            return;
        }
        for (int v = 0; v <= budget; ++v) {
            j[support[pos]] = v;
            rec(pos + 1, budget - v);
        }
        j[support[pos]] = 0;
    };
    rec(0, w);
    return out;
}

std::vector<BIdx> all_i(int d) {
    std::vector<BIdx> out;
    for (int mask = 0; mask < (1 << d); ++mask) {
        BIdx I(d);
        for (int k = 0; k < d; ++k) I[k] = (mask >> k) & 1;
        out.push_back(std::move(I));
    }
    return out;
}

MIdx midx_add(const MIdx& a, const BIdx& b) {
    MIdx s(a.size());
    for (size_t i = 0; i < a.size(); ++i) s[i] = a[i] + b[i];
    return s;
}

}  // namespace

ExpansionReport expand_main(const IntegerSimplex& simplex, const ScalarField& q, double tau,
                            const std::vector<double>& x, int w, double mu_tol,
                            const SolidAngleMethod& method) {
    int d = simplex.d;
    if (d > 3) throw std::invalid_argument("expand_main: d <= 3 required");
    if (tau <= 0) throw std::invalid_argument("expand_main: tau must be positive");
    if (w < 0 || w > max_expansion_order(d))
        throw std::invalid_argument("expand_main: order out of range");
    if (q.dim() != d) throw std::invalid_argument("expand_main: field dimension mismatch");
    if (mu_tol <= 0) mu_tol = default_mu_tol(d);

    // Base points reduce to the origin case: shift the function by tau*p
    // and the evaluation point by -tau*p.
    ScalarField qs = q;
    std::vector<double> xs = x;
    IntegerSimplex based = simplex;
    if (simplex.p != IVec(d, 0)) {
        Rat taur = rat_from_double(tau);
        RatVec shift(d);
        for (int i = 0; i < d; ++i) shift[i] = taur * rat_of(simplex.p[i]);
        qs = q.compose_affine(rat_identity(d), shift);
        for (int i = 0; i < d; ++i) xs[i] = x[i] - to_double(shift[i]);
        based = IntegerSimplex(IVec(d, 0), simplex.M);
    }

    ExpansionReport rep;
    rep.lhs_bruteforce =
        weighted_shifted_sum(SimplicialComplex::single(simplex), q, x, tau, method);

    // q_{tau,M}(y) = q_shifted(tau M y)
    Rat taur = rat_from_double(tau);
    RatMat tauM = rat_mat(based.M);
    for (auto& row : tauM)
        for (auto& c : row) c *= taur;
    ScalarField q_tau_m = qs.compose_affine(tauM, RatVec(d, Rat(0)));

    double det = static_cast<double>(based.abs_det());
    BasisFamily family(d);

    // Enumerate the (V, I, J) tuples, then evaluate them independently.
    struct Tuple {
        VIdx V;
        BIdx I;
        MIdx J;
    };
    std::vector<Tuple> tuples;
    for (const auto& V : family.all_v())
        for (const auto& I : all_i(d))
            for (const auto& J : dominated_j(I, w)) {
                if (!mu_support_filter(MuFunctional(V, I, J))) continue;
                tuples.push_back({V, I, J});
            }

    std::vector<ExpansionTerm> terms(tuples.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(effective_threads())
#endif
    for (long long t = 0; t < static_cast<long long>(tuples.size()); ++t) {
        const auto& [V, I, J] = tuples[static_cast<size_t>(t)];
        ExpansionTerm term;
        term.V = V;
        term.I = I;
        term.J = J;
        term.tau_power = d - midx_order(I) - midx_order(J);
        term.mu_coeff = apply_mu(MuFunctional(V, I, J), q_tau_m, mu_tol);
        if (term.mu_coeff != 0.0) {
            IMat L = int_transpose(int_mat_mul(based.M, family.d_matrix(V)));
            MvBernoulli mvb(midx_add(J, I), L);
            IVec lambda = family.lambda(V);
            std::vector<double> arg(d);
            IVec mlam = int_mat_vec(based.M, lambda);
            for (int i = 0; i < d; ++i) arg[i] = xs[i] - tau * static_cast<double>(mlam[i]);
            term.bernoulli_factor = mvb.eval_hnf(arg);
            term.contribution =
                det * std::pow(tau, term.tau_power) * term.mu_coeff * term.bernoulli_factor;
        }
        terms[static_cast<size_t>(t)] = std::move(term);
    }

    std::vector<double> contribs(terms.size());
    for (size_t i = 0; i < terms.size(); ++i) contribs[i] = terms[i].contribution;
    rep.total = pairwise_fold(std::move(contribs));
    rep.main_terms = std::move(terms);
    rep.residual = rep.lhs_bruteforce - rep.total;
    return rep;
}

std::vector<double> gamma_coefficients(const IntegerSimplex& simplex, const ScalarField& f, int w,
                                       double mu_tol) {
    int d = simplex.d;
    if (d > 3) throw std::invalid_argument("gamma_coefficients: d <= 3 required");
    if (w < 0 || w > max_expansion_order(d))
        throw std::invalid_argument("gamma_coefficients: order out of range");
    if (mu_tol <= 0) mu_tol = default_mu_tol(d);

    // <mu(V,I,J), f(p + M .)>
    RatVec p(d);
    for (int i = 0; i < d; ++i) p[i] = rat_of(simplex.p[i]);
    ScalarField fm = f.compose_affine(rat_mat(simplex.M), p);

    double det = static_cast<double>(simplex.abs_det());
    BasisFamily family(d);
    std::vector<double> gamma(static_cast<size_t>(w / 2), 0.0);

    for (const auto& V : family.all_v()) {
        IMat L = int_transpose(int_mat_mul(simplex.M, family.d_matrix(V)));
        for (const auto& I : all_i(d)) {
            for (const auto& J : dominated_j(I, w)) {
                int order = midx_order(I) + midx_order(J);
                if (order == 0 || order > w) continue;
                MvBernoulli mvb(midx_add(J, I), L);
                double bf = mvb.eval_hnf(std::vector<double>(d, 0.0));
                if (order % 2) {
                    // Parity: odd-order Bernoulli factors vanish at 0.
                    if (std::abs(bf) > 1e-10)
                        throw std::logic_error("gamma_coefficients: odd-order factor did not vanish");
                    continue;
                }
                if (!mu_support_filter(MuFunctional(V, I, J))) continue;
                if (bf == 0.0) continue;
                double mu = apply_mu(MuFunctional(V, I, J), fm, mu_tol);
                gamma[static_cast<size_t>(order / 2 - 1)] += det * mu * bf;
            }
        }
    }
    return gamma;
}

std::vector<double> gamma_coefficients(const SimplicialComplex& P, const ScalarField& f, int w,
                                       double mu_tol) {
    std::vector<double> total(static_cast<size_t>(w / 2), 0.0);
    for (const auto& s : P.simplices) {
        auto g = gamma_coefficients(s, f, w, mu_tol);
        for (size_t i = 0; i < total.size(); ++i) total[i] += g[i];
    }
    return total;
}

}  // namespace sm
