#include "sm/bases.hpp"

#include <stdexcept>

namespace sm {

BasisFamily::BasisFamily(int d) : d_(d) {
    if (d < 1 || d > 6) throw std::invalid_argument("BasisFamily: dimension must be in [1,6]");
    // Recursive construction. F^(d) = F_1 u F_2; bases 1..2^(d-2) extend
    // the (d-1)-family by e_d, the rest shear the last coordinate.
    std::vector<std::vector<IVec>> prev = {{{1}}};
    for (int h = 2; h <= d; ++h) {
        std::vector<std::vector<IVec>> cur;
        for (int part = 1; part <= 2; ++part) {
            for (const auto& base : prev) {
                std::vector<IVec> ext;
                for (const auto& v : base) {
                    IVec w = v;
                    if (part == 1) {
                        w.push_back(0);
                    } else {
                        long long s = 0;
                        for (long long c : v) s += c;
                        w.push_back(-s);
                    }
                    ext.push_back(std::move(w));
                }
                IVec ed(h, 0);
                ed[h - 1] = 1;
                ext.push_back(std::move(ed));
                cur.push_back(std::move(ext));
            }
        }
        prev = std::move(cur);
    }
    bases_ = std::move(prev);

    for (int j = 0; j < d_; ++j) {
        IVec e(d_, 0);
        e[j] = 1;
        union_vectors_.push_back(std::move(e));
    }
    for (int l = 0; l < d_; ++l)
        for (int k = l + 1; k < d_; ++k) {
            IVec v(d_, 0);
            v[l] = 1;
            v[k] = -1;
            union_vectors_.push_back(std::move(v));
        }
}

int BasisFamily::basis_index(const VIdx& V) const {
    if (static_cast<int>(V.size()) != d_) throw std::invalid_argument("basis_index: bad V length");
    for (int v : V)
        if (v != 1 && v != 2) throw std::invalid_argument("basis_index: V entries must be 1 or 2");
    // v_d selects the half and (v_2..v_{d-1}) recurse below it; v_1 does
    // not affect the basis.
    int j = 0;
    for (int h = 2; h <= d_; ++h) j |= (V[h - 1] - 1) << (h - 2);
    return j;
}

IVec BasisFamily::lambda(const VIdx& V) const {
    IVec lam;
    lam.push_back(V[0] == 1 ? 0 : 1);
    for (int h = 2; h <= d_; ++h) {
        if (V[h - 1] == 1) {
            lam.push_back(0);
        } else {
            long long s = 0;
            for (long long c : lam) s += c;
            lam.push_back(1 - s);
        }
    }
    return lam;
}

IMat BasisFamily::d_matrix(const VIdx& V) const {
    const auto& base = basis_of(V);
    IMat D(d_, IVec(d_, 0));
    for (int col = 0; col < d_; ++col)
        for (int row = 0; row < d_; ++row) D[row][col] = base[col][row];
    return D;
}

std::vector<VIdx> BasisFamily::all_v() const {
    std::vector<VIdx> out;
    int total = 1 << d_;
    for (int mask = 0; mask < total; ++mask) {
        VIdx V(d_);
        for (int h = 0; h < d_; ++h) V[h] = ((mask >> h) & 1) + 1;
        out.push_back(std::move(V));
    }
    return out;
}

int BasisFamily::union_index(const IVec& v) const {
    for (size_t i = 0; i < union_vectors_.size(); ++i)
        if (union_vectors_[i] == v) return static_cast<int>(i);
    return -1;
}

Theta::Theta(const BasisFamily& family, std::vector<bool> flags) : flags_(std::move(flags)) {
    const auto& uvs = family.union_vectors();
    if (flags_.size() != uvs.size()) throw std::invalid_argument("Theta: flag count mismatch");
    // Independent spanning subset of the flagged vectors.
    RatMat rows;
    for (size_t i = 0; i < uvs.size(); ++i) {
        if (!flags_[i]) continue;
        RatMat trial = rows;
        trial.push_back(RatVec(uvs[i].size()));
        for (size_t j = 0; j < uvs[i].size(); ++j) trial.back()[j] = rat_of(uvs[i][j]);
        if (rat_rank(trial) == trial.size()) {
            rows = std::move(trial);
            span_basis_.push_back(uvs[i]);
        }
    }
    dim_ = static_cast<int>(span_basis_.size());
    // Closure: flag every union vector inside the span.
    for (size_t i = 0; i < uvs.size(); ++i)
        if (!flags_[i] && contains(uvs[i])) flags_[i] = true;
}

bool Theta::contains(const IVec& v) const {
    bool zero = true;
    for (long long c : v) zero = zero && c == 0;
    if (zero) return true;
    if (span_basis_.empty()) return false;
    RatMat rows;
    for (const auto& b : span_basis_) {
        rows.push_back(RatVec(b.size()));
        for (size_t j = 0; j < b.size(); ++j) rows.back()[j] = rat_of(b[j]);
    }
    size_t base_rank = rows.size();
    rows.push_back(RatVec(v.size()));
    for (size_t j = 0; j < v.size(); ++j) rows.back()[j] = rat_of(v[j]);
    return rat_rank(rows) == base_rank;
}

Theta classify_frequency(const BasisFamily& family, const RatVec& xi) {
    const auto& uvs = family.union_vectors();
    std::vector<bool> flags(uvs.size());
    for (size_t i = 0; i < uvs.size(); ++i) {
        Rat dot(0);
        for (size_t j = 0; j < xi.size(); ++j) dot += xi[j] * rat_of(uvs[i][j]);
        flags[i] = dot == 0;
    }
    return Theta(family, std::move(flags));
}

Theta classify_frequency(const BasisFamily& family, const IVec& xi) {
    RatVec q(xi.size());
    for (size_t i = 0; i < xi.size(); ++i) q[i] = rat_of(xi[i]);
    return classify_frequency(family, q);
}

BIdx i_multiindex(const BasisFamily& family, const VIdx& V, const Theta& theta) {
    const auto& base = family.basis_of(V);
    BIdx I(base.size());
    for (size_t k = 0; k < base.size(); ++k) {
        int idx = family.union_index(base[k]);
        bool member = idx >= 0 ? theta.contains_union_vector(idx) : theta.contains(base[k]);
        I[k] = member ? 0 : 1;
    }
    return I;
}

bool delta_membership(const BIdx& I, const IMat& L, const IVec& n) {
    IVec Ln = int_mat_vec(L, n);
    for (size_t k = 0; k < I.size(); ++k) {
        bool zero = Ln[k] == 0;
        if (zero != (I[k] == 0)) return false;
    }
    return true;
}

}  // namespace sm
