#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "sm/scalar_field.hpp"

using namespace sm;

TEST_CASE("parser accepts the grammar") {
    CHECK_NOTHROW(ScalarField::parse("exp(x1+x2)", 2));
    CHECK_NOTHROW(ScalarField::parse("x1^2*x2 - 3", 2));
    CHECK_NOTHROW(ScalarField::parse("sin(x1)*cos(x2)/(1+x1^2)", 2));
    CHECK_NOTHROW(ScalarField::parse("-x1^2", 1));
    CHECK_NOTHROW(ScalarField::parse("2.5*x1 + 0.125", 1));
}

TEST_CASE("parser rejects bad input with positions") {
    CHECK_THROWS_AS(ScalarField::parse("x3", 2), ParseError);
    CHECK_THROWS_AS(ScalarField::parse("foo(x1)", 1), ParseError);
    CHECK_THROWS_AS(ScalarField::parse("exp(x1", 1), ParseError);
    CHECK_THROWS_AS(ScalarField::parse("x1 + ", 1), ParseError);
    CHECK_THROWS_AS(ScalarField::parse("x1 ^ x1", 1), ParseError);
    try {
        ScalarField::parse("x1 + x9", 2);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.position == 5);
    }
}

TEST_CASE("unary minus binds looser than the exponent") {
    ScalarField f = ScalarField::parse("-x1^2", 1);
    double x = 3.0;
    CHECK(f.eval(std::span<const double>(&x, 1)) == doctest::Approx(-9.0));
}

TEST_CASE("exact mixed partials") {
    ScalarField f = ScalarField::parse("exp(x1+x2)", 2);
    std::vector<double> zero{0.0, 0.0};
    CHECK(f.eval_partial({3, 2}, zero) == doctest::Approx(1.0).epsilon(1e-15));

    ScalarField g = ScalarField::parse("x1^2*x2", 2);
    std::vector<double> pt{2.0, 5.0};
    CHECK(g.eval_partial({1, 1}, pt) == doctest::Approx(4.0));

    ScalarField h = ScalarField::parse("sin(x1)", 1);
    std::vector<double> origin{0.0};
    CHECK(h.eval_partial({2}, origin) == doctest::Approx(0.0));
}

TEST_CASE("order cap is enforced") {
    ScalarField f(1, parse_expression("x1^2", 1), 3);
    std::vector<double> x{1.0};
    CHECK_THROWS_AS(f.eval_partial({4}, x), std::invalid_argument);
}

TEST_CASE("rational evaluation of polynomial trees is exact") {
    ScalarField f = ScalarField::parse("x1^2*x2 - 3", 2);
    RatVec x{Rat(3, 7), Rat(2, 5)};
    auto v = expr_eval_rat(f.expr(), x);
    REQUIRE(v.has_value());
    CHECK(*v == Rat(9, 49) * Rat(2, 5) - 3);

    ScalarField g = ScalarField::parse("exp(x1)", 1);
    CHECK_FALSE(expr_eval_rat(g.expr(), {Rat(1)}).has_value());
}

namespace {

// Random expression trees of depth <= 4 over the full node set.
ExprPtr random_expr(std::mt19937& rng, int dim, int depth) {
    std::uniform_int_distribution<int> pick(0, depth == 0 ? 1 : 9);
    switch (pick(rng)) {
        case 0: {
            std::uniform_int_distribution<int> num(-3, 3);
            return expr_const(Rat(num(rng)));
        }
        case 1: {
            std::uniform_int_distribution<int> var(0, dim - 1);
            return expr_var(var(rng));
        }
        case 2: return expr_add(random_expr(rng, dim, depth - 1), random_expr(rng, dim, depth - 1));
        case 3: return expr_sub(random_expr(rng, dim, depth - 1), random_expr(rng, dim, depth - 1));
        case 4: return expr_mul(random_expr(rng, dim, depth - 1), random_expr(rng, dim, depth - 1));
        case 5: {
            std::uniform_int_distribution<int> ex(1, 3);
            return expr_pow(random_expr(rng, dim, depth - 1), ex(rng));
        }
        case 6: return expr_sin(random_expr(rng, dim, depth - 1));
        case 7: return expr_cos(random_expr(rng, dim, depth - 1));
        case 8: return expr_neg(random_expr(rng, dim, depth - 1));
        default: return expr_exp(random_expr(rng, dim, depth - 1));
    }
}

}  // namespace

TEST_CASE("symbolic derivatives agree with central differences") {
    std::mt19937 rng(20240811);
    std::uniform_real_distribution<double> unif(-0.9, 0.9);
    const double h = 1e-4;
    int checked = 0;
    for (int trial = 0; trial < 60 && checked < 20; ++trial) {
        ExprPtr e = random_expr(rng, 2, 4);
        ScalarField f(2, e, 8);
        std::vector<double> x{unif(rng), unif(rng)};
        double base = f.eval(x);
        if (!std::isfinite(base) || std::abs(base) > 1e3) continue;
        for (int k = 0; k < 2; ++k) {
            MIdx alpha(2, 0);
            alpha[k] = 1;
            std::vector<double> xp = x, xm = x;
            xp[k] += h;
            xm[k] -= h;
            double fd = (f.eval(xp) - f.eval(xm)) / (2.0 * h);
            double sym = f.eval_partial(alpha, x);
            if (!std::isfinite(fd) || std::abs(fd) > 1e6) continue;
            CHECK(std::abs(sym - fd) <= 1e-5 * std::max(1.0, std::abs(fd)));
        }
        ++checked;
    }
    CHECK(checked >= 20);
}

TEST_CASE("compose_affine follows the chain rule") {
    ScalarField f = ScalarField::parse("exp(x1)", 1);
    ScalarField g = f.compose_affine({{Rat(2)}}, {Rat(0)});
    std::vector<double> zero{0.0};
    CHECK(g.eval_partial({1}, zero) == doctest::Approx(2.0));

    // identity composition
    ScalarField base = ScalarField::parse("x1+x2^2", 2);
    ScalarField id = base.compose_affine(rat_identity(2), RatVec(2, Rat(0)));
    std::vector<double> pt{0.3, -0.7};
    CHECK(id.eval(pt) == doctest::Approx(base.eval(pt)));
}

TEST_CASE("composition of affine maps matches the composed matrix") {
    ScalarField f = ScalarField::parse("exp(x1)*sin(x2)+x1^3", 2);
    RatMat A{{Rat(1), Rat(2)}, {Rat(0), Rat(1)}};
    RatMat B{{Rat(3), Rat(0)}, {Rat(1), Rat(1)}};
    ScalarField lhs = f.compose_affine(A, RatVec(2, Rat(0))).compose_affine(B, RatVec(2, Rat(0)));
    ScalarField rhs = f.compose_affine(rat_mat_mul(A, B), RatVec(2, Rat(0)));
    for (double u : {0.1, -0.4}) {
        for (double v : {0.2, 0.7}) {
            std::vector<double> y{u, v};
            CHECK(std::abs(lhs.eval(y) - rhs.eval(y)) < 1e-10);
        }
    }
}

TEST_CASE("hash consing returns shared nodes") {
    ExprPtr a = expr_add(expr_var(0), expr_const(Rat(1)));
    ExprPtr b = expr_add(expr_var(0), expr_const(Rat(1)));
    CHECK(a.get() == b.get());
}
