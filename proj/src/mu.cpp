#include "sm/mu.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sm/gauss.hpp"

namespace sm {

void RestrictedTerm::differentiate(int k, std::vector<RestrictedTerm>& out) const {
    // Chain rule through the affine map.
    size_t dim = A.size();
    for (size_t row = 0; row < dim; ++row) {
        if (A[row][k] == 0) continue;
        RestrictedTerm t = *this;
        t.coeff *= A[row][k];
        ++t.alpha[row];
        out.push_back(std::move(t));
    }
    // Boundary of the first-created slot; the deeper slot limits collapse
    // to zero, so only this one survives.
    if (m >= 1) {
        RestrictedTerm t = *this;
        t.coeff = -t.coeff;
        size_t s1 = static_cast<size_t>(h);
        for (size_t row = 0; row < dim; ++row) {
            Rat c = t.A[row][s1];
            if (c != 0) {
                t.b[row] += c;
                for (int col = 0; col < h; ++col) t.A[row][col] -= c;
                for (int col = h + 1; col < h + m; ++col) t.A[row][col] -= c;
            }
            t.A[row].erase(t.A[row].begin() + s1);
        }
        --t.m;
        out.push_back(std::move(t));
    }
}

RestrictedTerm RestrictedTerm::integrated_last() const {
    RestrictedTerm t = *this;
    size_t xcol = static_cast<size_t>(h - 1);
    for (auto& row : t.A) {
        Rat c = row[xcol];
        row.erase(row.begin() + xcol);
        row.push_back(c);  // newest slot sits last
    }
    --t.h;
    ++t.m;
    return t;
}

RestrictedTerm RestrictedTerm::restricted_zero() const {
    RestrictedTerm t = *this;
    size_t xcol = static_cast<size_t>(h - 1);
    for (auto& row : t.A) row.erase(row.begin() + xcol);
    --t.h;
    return t;
}

bool RestrictedTerm::restrict_upper(RestrictedTerm& out) const {
    // x_h = 1 - x_1 - ... - x_{h-1} puts the slot budget at zero, so terms
    // with pending integrals vanish.
    if (m >= 1) return false;
    out = *this;
    size_t xcol = static_cast<size_t>(h - 1);
    for (size_t row = 0; row < out.A.size(); ++row) {
        Rat c = out.A[row][xcol];
        if (c != 0) {
            out.b[row] += c;
            for (size_t col = 0; col < xcol; ++col) out.A[row][col] -= c;
        }
        out.A[row].erase(out.A[row].begin() + xcol);
    }
    --out.h;
    return true;
}

MuFunctional::MuFunctional(VIdx v, BIdx i, MIdx j) : V(std::move(v)), I(std::move(i)), J(std::move(j)) {
    size_t d = V.size();
    if (I.size() != d || J.size() != d) throw std::invalid_argument("MuFunctional: size mismatch");
    for (size_t k = 0; k < d; ++k) {
        if (V[k] != 1 && V[k] != 2) throw std::invalid_argument("MuFunctional: V entries must be 1 or 2");
        if (I[k] != 0 && I[k] != 1) throw std::invalid_argument("MuFunctional: I entries must be 0 or 1");
        if (J[k] < 0) throw std::invalid_argument("MuFunctional: negative J");
        if (I[k] == 0 && J[k] != 0) throw std::invalid_argument("MuFunctional: J not dominated by I");
    }
}

namespace {

std::vector<RestrictedTerm> merge_terms(std::vector<RestrictedTerm> terms) {
    auto key_less = [](const RestrictedTerm& a, const RestrictedTerm& b) {
        if (a.alpha != b.alpha) return a.alpha < b.alpha;
        if (a.b != b.b) return a.b < b.b;
        return a.A < b.A;
    };
    std::sort(terms.begin(), terms.end(), key_less);
    std::vector<RestrictedTerm> out;
    for (auto& t : terms) {
        if (!out.empty() && !key_less(out.back(), t) && !key_less(t, out.back())) {
            out.back().coeff += t.coeff;
        } else {
            out.push_back(std::move(t));
        }
    }
    std::erase_if(out, [](const RestrictedTerm& t) { return t.coeff == 0; });
    return out;
}

}  // namespace

std::vector<RestrictedTerm> apply_T(int h, int v, int i, int j, std::vector<RestrictedTerm> terms) {
    if (i == 0 && j != 0) throw std::invalid_argument("apply_T: j > 0 requires i = 1");
    if (v == 2 && i == 0) return {};
    for (const auto& t : terms)
        if (t.h != h) throw std::invalid_argument("apply_T: terms do not live on R^h");

    if (i == 1) {
        for (int rep = 0; rep < j; ++rep) {
            std::vector<RestrictedTerm> next;
            for (const auto& t : terms) t.differentiate(h - 1, next);
            terms = merge_terms(std::move(next));
        }
    }
    std::vector<RestrictedTerm> out;
    if (i == 0) {  // (1,0,0)
        for (const auto& t : terms) out.push_back(t.integrated_last());
    } else if (v == 1) {  // (1,1,j): restrict to x_h = 0 with sign -1
        for (const auto& t : terms) {
            RestrictedTerm r = t.restricted_zero();
            r.coeff = -r.coeff;
            out.push_back(std::move(r));
        }
    } else {  // (2,1,j): restrict to the slanted face with sign +1
        for (const auto& t : terms) {
            RestrictedTerm r;
            if (t.restrict_upper(r)) out.push_back(std::move(r));
        }
    }
    return merge_terms(std::move(out));
}

std::vector<RestrictedTerm> mu_terms(const MuFunctional& mu) {
    int d = mu.dim();
    RestrictedTerm seed;
    seed.coeff = 1;
    seed.alpha.assign(d, 0);
    seed.A = rat_identity(d);
    seed.b.assign(d, Rat(0));
    seed.h = d;
    seed.m = 0;
    std::vector<RestrictedTerm> terms{seed};
    for (int h = d; h >= 1; --h)
        terms = apply_T(h, mu.V[h - 1], mu.I[h - 1], mu.J[h - 1], std::move(terms));
    return terms;
}

namespace {

struct TermEvaluator {
    const ExprPtr expr;
    std::vector<std::vector<double>> A;  // dim x m
    std::vector<double> b;
    int m;

    double integrand(const std::vector<double>& s) const {
        std::vector<double> arg = b;
        for (size_t row = 0; row < arg.size(); ++row)
            for (int col = 0; col < m; ++col) arg[row] += A[row][col] * s[col];
        return expr_eval(expr, arg);
    }

    double nested(int level, std::vector<double>& s, double budget, int order) const {
        if (level == m) return integrand(s);
        const GaussRule& rule = gauss_rule(order);
        double half = 0.5 * budget;
        double sum = 0.0;
        for (size_t i = 0; i < rule.nodes.size(); ++i) {
            s[level] = half * (rule.nodes[i] + 1.0);
            sum += rule.weights[i] * nested(level + 1, s, budget - s[level], order);
        }
        return half * sum;
    }

    double value(double tol) const {
        if (m == 0) return integrand({});
        std::vector<double> s(m, 0.0);
        double prev = nested(0, s, 1.0, 7);
        for (int order = 15; order <= 127; order = 2 * order + 1) {
            double cur = nested(0, s, 1.0, order);
            if (std::abs(cur - prev) <= tol) return cur;
            prev = cur;
        }
        throw std::runtime_error("apply_mu: quadrature did not converge at requested tolerance");
    }
};

}  // namespace

double apply_mu(const MuFunctional& mu, const ScalarField& g, double tol) {
    int d = mu.dim();
    if (g.dim() != d) throw std::invalid_argument("apply_mu: field dimension mismatch");
    if (g.max_order() < midx_order(mu.J) + d)
        throw std::invalid_argument("apply_mu: field max_order too small (need |J| + d)");
    auto terms = mu_terms(mu);
    double total = 0.0;
    double per_term_tol = terms.empty() ? tol : tol / static_cast<double>(terms.size());
    for (const auto& t : terms) {
        ExprPtr dg = g.partial(t.alpha);
        if (dg->op == ExprOp::Const && dg->value == 0) continue;
        TermEvaluator ev{dg, {}, {}, t.m};
        ev.A.resize(t.A.size());
        for (size_t row = 0; row < t.A.size(); ++row) {
            ev.A[row].resize(t.m);
            for (int col = 0; col < t.m; ++col) ev.A[row][col] = to_double(t.A[row][col]);
        }
        ev.b.resize(t.b.size());
        for (size_t row = 0; row < t.b.size(); ++row) ev.b[row] = to_double(t.b[row]);
        total += to_double(t.coeff) * ev.value(per_term_tol);
    }
    return total;
}

bool mu_support_filter(const MuFunctional& mu) {
    for (size_t h = 0; h < mu.V.size(); ++h)
        if (mu.V[h] == 2 && mu.I[h] == 0) return false;
    return true;
}

double default_mu_tol(int d) { return d <= 2 ? 1e-12 : 1e-10; }

}  // namespace sm
