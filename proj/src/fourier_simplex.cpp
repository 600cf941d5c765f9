#include "sm/fourier_simplex.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

#include "sm/gauss.hpp"

namespace sm {

bool FourierExpansion::in_cone(const std::vector<double>& xi) const {
    RatVec xr = rat_vec(xi);
    RatVec pulled(d, Rat(0));
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) pulled[i] += rat_of(mt_[i][j]) * xr[j];
    const auto& uvs = family_->union_vectors();
    for (size_t i = 0; i < uvs.size(); ++i) {
        Rat dot(0);
        for (int j = 0; j < d; ++j) dot += pulled[j] * rat_of(uvs[i][j]);
        if ((dot == 0) != static_cast<bool>(theta_flags_[i])) return false;
    }
    return true;
}

std::complex<double> FourierExpansion::evaluate(const std::vector<double>& xi) const {
    if (static_cast<int>(xi.size()) != d)
        throw std::invalid_argument("FourierExpansion: xi dimension mismatch");
    if (!in_cone(xi)) throw std::invalid_argument("FourierExpansion: xi not in the cone Q(theta)");
    const double two_pi = 2.0 * M_PI;
    std::complex<double> total(0.0, 0.0);
    for (const auto& term : terms) {
        double ph = 0.0;
        for (int i = 0; i < d; ++i) ph += static_cast<double>(term.phase[i]) * xi[i];
        std::complex<double> val = term.coeff * std::polar(1.0, -two_pi * tau * ph);
        for (const auto& [dir, expnt] : term.denominators) {
            double dxi = 0.0;
            for (int i = 0; i < d; ++i) dxi += static_cast<double>(dir[i]) * xi[i];
            val /= std::pow(std::complex<double>(0.0, two_pi * tau * dxi), expnt);
        }
        total += val;
    }
    return prefactor * total;
}

namespace {

// Common assembly: terms for Q(theta) with directions and phases mapped
// through `map_vec` (identity for the standard simplex, M otherwise).
FourierExpansion assemble(const ScalarField& g, const BasisFamily& family, const Theta& theta,
                          int w, double tol, const IMat* M) {
    int d = family.dim();
    if (g.dim() != d) throw std::invalid_argument("expand: field dimension mismatch");
    if (g.max_order() < w + 1 + d)
        throw std::invalid_argument("expand: field max_order too small (need w + 1 + d)");

    FourierExpansion fx;
    fx.d = d;
    fx.w = w;
    fx.family_ = std::make_shared<BasisFamily>(family);
    fx.theta_flags_ = theta.flags();
    fx.mt_ = M ? int_transpose(*M) : int_identity(d);

    auto map_vec = [&](const IVec& v) { return M ? int_mat_vec(*M, v) : v; };

    for (const auto& V : family.all_v()) {
        BIdx I = i_multiindex(family, V, theta);
        const auto& base = family.basis_of(V);
        IVec lambda = family.lambda(V);
        // Enumerate J with support inside I and |J| <= w.
        std::vector<int> support;
        for (int k = 0; k < d; ++k)
            if (I[k] == 1) support.push_back(k);
        std::vector<MIdx> js;
        MIdx j0(d, 0);
        std::function<void(size_t, int)> rec = [&](size_t pos, int budget) {
            if (pos == support.size()) {
                js.push_back(j0);
                return;
            }
            for (int v = 0; v <= budget; ++v) {
                j0[support[pos]] = v;
                rec(pos + 1, budget - v);
            }
            j0[support[pos]] = 0;
        };
        rec(0, w);
        for (const auto& J : js) {
            MuFunctional mu(V, I, J);
            if (!mu_support_filter(mu)) continue;
            double coeff = apply_mu(mu, g, tol);
            if (midx_order(I) % 2) coeff = -coeff;
            if (coeff == 0.0) continue;
            FourierTerm term;
            term.V = V;
            term.J = J;
            term.coeff = coeff;
            term.phase = map_vec(lambda);
            for (int k = 0; k < d; ++k)
                if (I[k] == 1) term.denominators.emplace_back(map_vec(base[k]), J[k] + 1);
            fx.terms.push_back(std::move(term));
        }
    }
    return fx;
}

}  // namespace

FourierExpansion expand_standard(const ScalarField& g, const BasisFamily& family,
                                 const Theta& theta, int w, double tol) {
    return assemble(g, family, theta, w, tol, nullptr);
}

FourierExpansion expand_general(const IntegerSimplex& simplex, const ScalarField& q, double tau,
                                const BasisFamily& family, const Theta& theta, int w, double tol) {
    if (simplex.d != family.dim()) throw std::invalid_argument("expand_general: dimension mismatch");
    int d = simplex.d;
    for (long long c : simplex.p)
        if (c != 0) throw std::invalid_argument("expand_general: simplex must be based at 0");
    // q_{tau,M}(x) = q(tau M x)
    Rat taur = rat_from_double(tau);
    RatMat A = rat_mat(simplex.M);
    for (auto& row : A)
        for (auto& c : row) c *= taur;
    ScalarField q_tau_m = q.compose_affine(A, RatVec(d, Rat(0)));
    FourierExpansion fx = assemble(q_tau_m, family, theta, w, tol, &simplex.M);
    fx.tau = tau;
    fx.prefactor = std::pow(tau, d) * static_cast<double>(simplex.abs_det());
    return fx;
}

namespace {

struct OscIntegrand {
    const ScalarField& q;
    std::vector<std::vector<double>> tauM;  // d x d
    std::vector<double> omega;              // 2pi tau M^t xi (radians per unit)
    int d;
    int order;

    std::complex<double> point(const std::vector<double>& y) const {
        std::vector<double> arg(d, 0.0);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) arg[i] += tauM[i][j] * y[j];
        double phase = 0.0;
        for (int j = 0; j < d; ++j) phase += omega[j] * y[j];
        return q.eval(arg) * std::polar(1.0, -phase);
    }

    std::complex<double> nested(int level, std::vector<double>& y, double budget) const {
        if (level == d) return point(y);
        // Keep >= 10 nodes per oscillation period on this axis.
        double periods = std::abs(omega[level]) * budget / (2.0 * M_PI);
        int panels = std::max(1, static_cast<int>(std::ceil(periods * 10.0 / order)));
        const GaussRule& rule = gauss_rule(order);
        std::complex<double> sum(0.0, 0.0);
        double width = budget / panels;
        for (int p = 0; p < panels; ++p) {
            double lo = p * width;
            double half = 0.5 * width;
            for (size_t i = 0; i < rule.nodes.size(); ++i) {
                y[level] = lo + half * (rule.nodes[i] + 1.0);
                sum += rule.weights[i] * half * nested(level + 1, y, budget - y[level]);
            }
        }
        return sum;
    }
};

}  // namespace

std::complex<double> oracle_ft(const IntegerSimplex& simplex, const ScalarField& q, double tau,
                               const std::vector<double>& xi, double tol) {
    int d = simplex.d;
    if (q.dim() != d || static_cast<int>(xi.size()) != d)
        throw std::invalid_argument("oracle_ft: dimension mismatch");
    double mnorm = 0.0, xinorm = 0.0;
    for (int i = 0; i < d; ++i) {
        double rowsum = 0.0;
        for (int j = 0; j < d; ++j) rowsum += std::abs(static_cast<double>(simplex.M[i][j]));
        mnorm = std::max(mnorm, rowsum);
        xinorm += xi[i] * xi[i];
    }
    xinorm = std::sqrt(xinorm);
    if (xinorm * tau * mnorm > 200.0)
        throw std::invalid_argument("oracle_ft: |xi| tau |M| exceeds the oscillation cap (200)");

    OscIntegrand integ{q, {}, {}, d, 31};
    integ.tauM.assign(d, std::vector<double>(d));
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) integ.tauM[i][j] = tau * static_cast<double>(simplex.M[i][j]);
    integ.omega.assign(d, 0.0);
    for (int j = 0; j < d; ++j) {
        for (int i = 0; i < d; ++i)
            integ.omega[j] += 2.0 * M_PI * tau * static_cast<double>(simplex.M[i][j]) * xi[i];
    }
    // Phase shift for the base point plus the prefactor.
    double base_phase = 0.0;
    for (int i = 0; i < d; ++i) base_phase += 2.0 * M_PI * tau * static_cast<double>(simplex.p[i]) * xi[i];
    double fact = std::pow(tau, d) * static_cast<double>(simplex.abs_det());

    if (simplex.p != IVec(d, 0)) {
        // int_{tau(p+P)} = e^{-2pi i tau p.xi} int_{tau P} q(. + tau p)
        RatMat id = rat_identity(d);
        RatVec shift(d);
        Rat taur = rat_from_double(tau);
        for (int i = 0; i < d; ++i) shift[i] = taur * rat_of(simplex.p[i]);
        ScalarField shifted = q.compose_affine(id, shift);
        IntegerSimplex based(IVec(d, 0), simplex.M);
        return std::polar(1.0, -base_phase) * oracle_ft(based, shifted, tau, xi, tol);
    }

    std::vector<double> y(d, 0.0);
    std::complex<double> prev = fact * integ.nested(0, y, 1.0);
    for (int order = 63; order <= 255; order = 2 * order + 1) {
        integ.order = order;
        std::complex<double> cur = fact * integ.nested(0, y, 1.0);
        if (std::abs(cur - prev) <= tol) return cur;
        prev = cur;
    }
    throw std::runtime_error("oracle_ft: quadrature did not converge");
}

}  // namespace sm
