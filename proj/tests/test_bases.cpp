#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "sm/bases.hpp"

using namespace sm;

TEST_CASE("d=1 family") {
    BasisFamily f(1);
    CHECK(f.basis_count() == 1);
    CHECK(f.basis(0) == std::vector<IVec>{{1}});
    CHECK(f.lambda({1}) == IVec{0});
    CHECK(f.lambda({2}) == IVec{1});
}

TEST_CASE("d=2 family matches the fixture table") {
    BasisFamily f(2);
    CHECK(f.basis_count() == 2);
    CHECK(f.basis(0) == std::vector<IVec>{{1, 0}, {0, 1}});
    CHECK(f.basis(1) == std::vector<IVec>{{1, -1}, {0, 1}});
    CHECK(f.lambda({1, 1}) == IVec{0, 0});
    CHECK(f.lambda({2, 1}) == IVec{1, 0});
    CHECK(f.lambda({1, 2}) == IVec{0, 1});
    CHECK(f.lambda({2, 2}) == IVec{1, 0});
}

TEST_CASE("d=3 family matches the fixture table") {
    BasisFamily f(3);
    CHECK(f.basis_count() == 4);
    CHECK(f.basis(0) == std::vector<IVec>{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
    CHECK(f.basis(1) == std::vector<IVec>{{1, -1, 0}, {0, 1, 0}, {0, 0, 1}});
    CHECK(f.basis(2) == std::vector<IVec>{{1, 0, -1}, {0, 1, -1}, {0, 0, 1}});
    CHECK(f.basis(3) == std::vector<IVec>{{1, -1, 0}, {0, 1, -1}, {0, 0, 1}});
    CHECK(f.basis_of({1, 2, 2}) == f.basis(3));
    CHECK(f.lambda({1, 1, 1}) == IVec{0, 0, 0});
    CHECK(f.lambda({2, 1, 1}) == IVec{1, 0, 0});
    CHECK(f.lambda({1, 2, 1}) == IVec{0, 1, 0});
    CHECK(f.lambda({2, 2, 1}) == IVec{1, 0, 0});
    CHECK(f.lambda({1, 1, 2}) == IVec{0, 0, 1});
    CHECK(f.lambda({2, 1, 2}) == IVec{1, 0, 0});
    CHECK(f.lambda({1, 2, 2}) == IVec{0, 1, 0});
    CHECK(f.lambda({2, 2, 2}) == IVec{1, 0, 0});
}

TEST_CASE("bases are unimodular and the union has the expected form") {
    for (int d = 1; d <= 5; ++d) {
        BasisFamily f(d);
        for (int b = 0; b < f.basis_count(); ++b) {
            IMat m(d, IVec(d));
            for (int col = 0; col < d; ++col)
                for (int row = 0; row < d; ++row) m[row][col] = f.basis(b)[col][row];
            long long det = int_det(m);
            CHECK((det == 1 || det == -1));
        }
        // union = {e_j} u {e_l - e_k : l < k}
        CHECK(static_cast<int>(f.union_vectors().size()) == d + d * (d - 1) / 2);
        for (int b = 0; b < f.basis_count(); ++b)
            for (const auto& v : f.basis(b)) CHECK(f.union_index(v) >= 0);
    }
}

TEST_CASE("distinct V give distinct bases") {
    BasisFamily f(4);
    std::set<std::vector<IVec>> seen;
    for (int b = 0; b < f.basis_count(); ++b) seen.insert(f.basis(b));
    CHECK(static_cast<int>(seen.size()) == f.basis_count());
}

TEST_CASE("classify_frequency fixtures") {
    BasisFamily f(2);
    Theta full = classify_frequency(f, IVec{0, 0});
    CHECK(full.is_full(2));

    Theta diag = classify_frequency(f, IVec{3, 3});
    CHECK(diag.dim() == 1);
    CHECK(diag.contains({1, -1}));
    CHECK_FALSE(diag.contains({1, 0}));

    Theta zero = classify_frequency(f, IVec{1, 2});
    CHECK(zero.is_zero());
}

TEST_CASE("i_multiindex fixtures") {
    BasisFamily f(2);
    Theta full = classify_frequency(f, IVec{0, 0});
    Theta zero = classify_frequency(f, IVec{1, 2});
    Theta diag = classify_frequency(f, IVec{3, 3});
    CHECK(i_multiindex(f, {1, 1}, full) == BIdx{0, 0});
    CHECK(i_multiindex(f, {1, 1}, zero) == BIdx{1, 1});
    // V = (*, 2) has basis {(1,-1),(0,1)}
    CHECK(i_multiindex(f, {1, 2}, diag) == BIdx{0, 1});
}

TEST_CASE("delta_membership fixtures") {
    IMat id2{{1, 0}, {0, 1}};
    CHECK(delta_membership({0, 0}, id2, {0, 0}));
    CHECK_FALSE(delta_membership({1, 1}, id2, {0, 0}));
    CHECK(delta_membership({1, 0}, id2, {5, 0}));
    CHECK_FALSE(delta_membership({1, 0}, id2, {5, 1}));
}

TEST_CASE("classification lands each frequency in exactly its own cone") {
    std::mt19937 rng(7);
    for (int d = 2; d <= 3; ++d) {
        BasisFamily f(d);
        std::uniform_int_distribution<int> coord(-20, 20);
        for (int trial = 0; trial < 1000; ++trial) {
            IVec xi(d);
            for (auto& c : xi) c = coord(rng);
            Theta theta = classify_frequency(f, xi);
            // definitional scan: orthogonal iff flagged
            const auto& uvs = f.union_vectors();
            for (size_t i = 0; i < uvs.size(); ++i) {
                long long dot = 0;
                for (int k = 0; k < d; ++k) dot += uvs[i][k] * xi[k];
                CHECK((dot == 0) == theta.contains_union_vector(static_cast<int>(i)));
            }
            // closure idempotence: rebuilding from the flags changes nothing
            Theta again(f, theta.flags());
            CHECK(again == theta);
        }
    }
}

namespace {

IMat random_unimodular(std::mt19937& rng, int d) {
    // product of elementary shears and swaps
    IMat m = int_identity(d);
    std::uniform_int_distribution<int> idx(0, d - 1), shear(-2, 2), steps(4, 8);
    int n = steps(rng);
    for (int s = 0; s < n; ++s) {
        int i = idx(rng), j = idx(rng);
        if (i == j) continue;
        long long q = shear(rng);
        for (int r = 0; r < d; ++r) m[r][j] += q * m[r][i];
    }
    return m;
}

}  // namespace

TEST_CASE("coset identity: the union of cones with fixed I is Delta(I, (MD_V)^t)") {
    std::mt19937 rng(99);
    for (int d = 2; d <= 3; ++d) {
        BasisFamily f(d);
        for (int trial = 0; trial < 3; ++trial) {
            IMat M = random_unimodular(rng, d);
            IMat Mt = int_transpose(M);
            const int B = d == 2 ? 8 : 4;
            for (const auto& V : f.all_v()) {
                IMat L = int_transpose(int_mat_mul(M, f.d_matrix(V)));
                IVec n(d, -B);
                for (;;) {
                    // theta with n in Q_M(M theta) is classify(M^t n)
                    Theta theta = classify_frequency(f, int_mat_vec(Mt, n));
                    BIdx In = i_multiindex(f, V, theta);
                    CHECK(delta_membership(In, L, n));
                    // and no other I admits n
                    for (int mask = 0; mask < (1 << d); ++mask) {
                        BIdx I(d);
                        for (int k = 0; k < d; ++k) I[k] = (mask >> k) & 1;
                        CHECK(delta_membership(I, L, n) == (I == In));
                    }
                    int axis = 0;
                    while (axis < d && ++n[axis] > B) n[axis++] = -B;
                    if (axis == d) break;
                }
            }
        }
    }
}
