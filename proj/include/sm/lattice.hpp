#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sm/parallel.hpp"
#include "sm/rational.hpp"
#include "sm/scalar_field.hpp"

namespace sm {

// The affine image p + M.S_d of the standard simplex; columns of M are the
// edge vectors, so the vertices are p, p+m_1, ..., p+m_d.
struct IntegerSimplex {
    int d = 0;
    IVec p;
    IMat M;  // row-major; column j is edge vector m_{j+1}

    IntegerSimplex() = default;
    IntegerSimplex(IVec base, IMat edges);

    long long det() const { return det_; }
    long long abs_det() const { return det_ < 0 ? -det_ : det_; }
    std::vector<IVec> vertices() const;
    const RatMat& inverse_m() const { return inv_m_; }  // M^{-1}, exact

  private:
    long long det_ = 0;
    RatMat inv_m_;
};

struct SimplicialComplex {
    int d = 0;
    std::vector<IntegerSimplex> simplices;

    SimplicialComplex() = default;
    explicit SimplicialComplex(std::vector<IntegerSimplex> s);
    static SimplicialComplex single(IntegerSimplex s);

    double volume() const;  // sum of |det|/d!
};

struct SolidAngleMethod {
    enum class Kind { ExactLowDim, MonteCarlo };
    Kind kind = Kind::ExactLowDim;
    long long samples = 0;
    uint64_t seed = 0;

    static SolidAngleMethod exact() { return {}; }
    static SolidAngleMethod monte_carlo(long long samples, uint64_t seed) {
        return {Kind::MonteCarlo, samples, seed};
    }
};

// Classification of a point against a dilated simplex, all exact.
struct FaceClass {
    bool inside = false;        // in the closed simplex
    std::vector<int> zeros;     // barycentric coordinates that vanish (0..d)
};

FaceClass classify_point(const IntegerSimplex& s, const RatVec& x, const Rat& tau);

// omega_{tau P}(x): normalized solid angle of the dilated complex,
// additive over the simplices. ExactLowDim is available for d <= 3.
double solid_angle(const SimplicialComplex& P, const RatVec& x, const Rat& tau,
                   const SolidAngleMethod& method = {});
double solid_angle(const SimplicialComplex& P, const std::vector<double>& x,
                   const SolidAngleMethod& method = {});

// S_N(f, P) = N^{-d} sum_n omega_P(n/N) f(n/N).
double weighted_sum(const SimplicialComplex& P, const ScalarField& f, long long N,
                    const SolidAngleMethod& method = {}, ExecMode mode = ExecMode::Parallel);

// sum_n omega_{tau P}(n) for an integer dilation.
double weighted_lattice_count(const SimplicialComplex& P, long long tau,
                              const SolidAngleMethod& method = {},
                              ExecMode mode = ExecMode::Parallel);

// sum_n omega_{tau P}(x + n) q(x + n); the brute-force side of the
// expansion reports. tau may be any positive real.
double weighted_shifted_sum(const SimplicialComplex& P, const ScalarField& q,
                            const std::vector<double>& x, double tau,
                            const SolidAngleMethod& method = {},
                            ExecMode mode = ExecMode::Parallel);

// Fan triangulation of a convex polytope given by its vertices; no extra
// vertices are introduced. Supported for d <= 3.
SimplicialComplex triangulate_convex(const std::vector<IVec>& vertices);

// JSON complex format: {"d":2,"simplices":[{"p":[0,0],"M":[[1,0],[0,1]]}]}
// with M given column-major (each inner array is one edge vector).
SimplicialComplex complex_from_json(const std::string& text);
std::string complex_to_json(const SimplicialComplex& P);
SimplicialComplex load_complex(const std::string& path);

}  // namespace sm
