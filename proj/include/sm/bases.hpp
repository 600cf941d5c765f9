#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "sm/rational.hpp"

namespace sm {

// Multi-index V in {1,2}^d, stored as ints.
using VIdx = std::vector<int>;
// Multi-index I in {0,1}^d.
using BIdx = std::vector<int>;

// The recursive family of 2^(d-1) unimodular bases together with the
// shift vectors lambda_V. The union of all basis vectors is
// {e_j} u {e_l - e_k : l < k}, and that fixed enumeration also indexes
// the subspace bitsets below.
class BasisFamily {
  public:
    explicit BasisFamily(int d);

    int dim() const { return d_; }
    int basis_count() const { return 1 << (d_ - 1); }

    // Basis j (0-based), as a list of d integer vectors.
    const std::vector<IVec>& basis(int j) const { return bases_[j]; }

    // 0-based basis index determined by (v_2, ..., v_d).
    int basis_index(const VIdx& V) const;
    const std::vector<IVec>& basis_of(const VIdx& V) const { return bases_[basis_index(V)]; }

    IVec lambda(const VIdx& V) const;

    // D_V: columns are the vectors of B_V.
    IMat d_matrix(const VIdx& V) const;

    // All V in {1,2}^d in lexicographic order.
    std::vector<VIdx> all_v() const;

    const std::vector<IVec>& union_vectors() const { return union_vectors_; }
    int union_index(const IVec& v) const;  // -1 if not a union vector

  private:
    int d_;
    std::vector<std::vector<IVec>> bases_;
    std::vector<IVec> union_vectors_;
};

// A subspace theta spanned by basis vectors, represented by the set of
// union vectors it contains. Closure (a vector is flagged iff it lies in
// the span of the flagged set) is enforced at construction.
class Theta {
  public:
    Theta(const BasisFamily& family, std::vector<bool> flags);

    const std::vector<bool>& flags() const { return flags_; }
    bool contains_union_vector(int idx) const { return flags_[idx]; }
    int dim() const { return dim_; }
    bool is_zero() const { return dim_ == 0; }
    bool is_full(int d) const { return dim_ == d; }

    // Exact rational membership test for arbitrary vectors.
    bool contains(const IVec& v) const;

    bool operator==(const Theta& o) const { return flags_ == o.flags_; }

  private:
    std::vector<bool> flags_;
    std::vector<IVec> span_basis_;
    int dim_;
};

// The unique theta with xi in Q(theta): flags exactly the union vectors
// orthogonal to xi.
Theta classify_frequency(const BasisFamily& family, const RatVec& xi);
Theta classify_frequency(const BasisFamily& family, const IVec& xi);

// I_{V,theta}: i_k = 0 iff the k-th vector of B_V lies in theta.
BIdx i_multiindex(const BasisFamily& family, const VIdx& V, const Theta& theta);

// n in Delta(I, L): (Ln)_k = 0 iff i_k = 0.
bool delta_membership(const BIdx& I, const IMat& L, const IVec& n);

}  // namespace sm
