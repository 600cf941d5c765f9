// Timing comparison of the serial reference kernels against the OpenMP
// paths. Run: ./sm_bench [repeats]

#include <chrono>
#include <cstdio>
#include <cstdlib>

#include "sm/lattice.hpp"
#include "sm/mv_bernoulli.hpp"
#include "sm/parallel.hpp"
#include "sm/quadrature.hpp"
#include "sm/scalar_field.hpp"

using namespace sm;

namespace {

template <typename Fn>
double time_ms(Fn&& fn, int repeats) {
    double best = 1e300;
    for (int r = 0; r < repeats; ++r) {
        auto t0 = std::chrono::steady_clock::now();
        fn();
        auto t1 = std::chrono::steady_clock::now();
        best = std::min(best, std::chrono::duration<double, std::milli>(t1 - t0).count());
    }
    return best;
}

void report(const char* name, double serial_ms, double parallel_ms, double serial_val,
            double parallel_val) {
    std::printf("%-28s serial %9.2f ms   omp %9.2f ms   speedup %.2fx   diff %.3e\n", name,
                serial_ms, parallel_ms, serial_ms / parallel_ms,
                std::abs(serial_val - parallel_val));
}

}  // namespace

int main(int argc, char** argv) {
    int repeats = argc > 1 ? std::atoi(argv[1]) : 3;
    std::printf("threads: %d\n", effective_threads());

    {
        auto tri = SimplicialComplex::single(
            IntegerSimplex({0, 0}, {{1, 0}, {0, 1}}));
        ScalarField f = ScalarField::parse("exp(x1+x2)", 2);
        double vs = 0.0, vp = 0.0;
        double ts = time_ms([&] { vs = weighted_sum(tri, f, 192, {}, ExecMode::Serial); }, repeats);
        double tp = time_ms([&] { vp = weighted_sum(tri, f, 192, {}, ExecMode::Parallel); }, repeats);
        report("weighted_sum N=192", ts, tp, vs, vp);
    }
    {
        auto cube = triangulate_convex(
            {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 1, 0}, {1, 0, 1}, {0, 1, 1}, {1, 1, 1}});
        double vs = 0.0, vp = 0.0;
        double ts =
            time_ms([&] { vs = weighted_lattice_count(cube, 24, {}, ExecMode::Serial); }, repeats);
        double tp =
            time_ms([&] { vp = weighted_lattice_count(cube, 24, {}, ExecMode::Parallel); }, repeats);
        report("lattice_count cube tau=24", ts, tp, vs, vp);
    }
    {
        MvBernoulli mvb({2, 1}, {{1, 0}, {1, 2}});
        std::vector<std::vector<double>> pts;
        for (int i = 0; i < 32; ++i) pts.push_back({0.1 + 0.7 * i / 32.0, 0.3 + 0.011 * i});
        double vs = 0.0, vp = 0.0;
        double ts = time_ms(
            [&] { vs = mvb.eval_fourier_many(pts, 2e-3, 0, ExecMode::Serial)[0]; }, repeats);
        double tp = time_ms(
            [&] { vp = mvb.eval_fourier_many(pts, 2e-3, 0, ExecMode::Parallel)[0]; }, repeats);
        report("mvb fourier 32 pts", ts, tp, vs, vp);
    }
    return 0;
}
