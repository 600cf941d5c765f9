#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "sm/bernoulli1d.hpp"

using namespace sm;

TEST_CASE("base cases match the recursive definition") {
    const auto& t = bernoulli_table();
    CHECK(t.poly(0).coeffs == RatVec{Rat(1)});
    CHECK(t.poly(1).coeffs == RatVec{Rat(-1, 2), Rat(1)});
    // B_2 = (x^2 - x + 1/6)/2
    CHECK(t.poly(2).coeffs == RatVec{Rat(1, 12), Rat(-1, 2), Rat(1, 2)});
    CHECK(t.value_at_zero(2) == Rat(1, 12));
}

TEST_CASE("derivative chain and zero mean hold exactly for all cached degrees") {
    const auto& t = bernoulli_table();
    for (int n = 0; n < t.max_degree(); ++n) {
        const auto& lo = t.poly(n);
        const auto& hi = t.poly(n + 1);
        for (int k = 0; k <= n; ++k) CHECK(hi.coeffs[k + 1] * (k + 1) == lo.coeffs[k]);
        Rat mean(0);
        for (int k = 0; k <= n + 1; ++k) mean += hi.coeffs[k] / (k + 1);
        CHECK(mean == 0);
    }
}

TEST_CASE("periodized values") {
    CHECK(bernoulli_periodized(1, 7.0) == 0.0);
    CHECK(bernoulli_periodized(1, 0.25) == doctest::Approx(-0.25).epsilon(1e-15));
    CHECK(bernoulli_periodized(2, 1.0) == doctest::Approx(1.0 / 12.0).epsilon(1e-15));
}

TEST_CASE("periodicity is exact for representable arguments") {
    for (double x : {0.25, 0.625, -0.375, 3.0078125}) {
        for (int n = 0; n <= 12; ++n)
            CHECK(bernoulli_periodized(n, x + 1.0) == bernoulli_periodized(n, x));
    }
}

TEST_CASE("odd degrees vanish at integers") {
    const auto& t = bernoulli_table();
    CHECK(bernoulli_periodized(1, 0.0) == 0.0);
    for (int n = 3; n <= 31; n += 2) CHECK(t.value_at_zero(n) == 0);
}

TEST_CASE("sup bounds from the trigonometric expansion") {
    const double pi = M_PI;
    for (int n = 0; n <= 12; ++n) {
        double sup = 0.0;
        for (int i = 0; i <= 10000; ++i)
            sup = std::max(sup, std::abs(bernoulli_periodized(n, i / 10000.0)));
        double lower = std::pow(2.0 * pi, -n);
        double upper = (pi * pi / 3.0) * lower;
        CHECK(sup >= lower * (1.0 - 1e-9));
        CHECK(sup <= upper * (1.0 + 1e-9));
    }
}

TEST_CASE("symmetric Fourier partial sums") {
    CHECK(std::abs(bernoulli_fourier_partial(2, 0.0, 10000) - 1.0 / 12.0) < 1e-6);
    CHECK(bernoulli_fourier_partial(1, 0.0, 100) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(std::abs(bernoulli_fourier_partial(3, 0.5, 1000) - bernoulli_periodized(3, 0.5)) < 1e-8);
}

TEST_CASE("finite differences of B_{n+1} recover B_n inside the period") {
    const double h = 1e-5;
    for (int n = 0; n <= 6; ++n) {
        for (double x : {0.12, 0.37, 0.51, 0.83}) {
            double fd = (bernoulli_periodized(n + 1, x + h) - bernoulli_periodized(n + 1, x - h)) /
                        (2.0 * h);
            CHECK(std::abs(fd - bernoulli_periodized(n, x)) < 1e-7);
        }
    }
}
