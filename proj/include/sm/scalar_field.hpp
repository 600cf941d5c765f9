#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sm/rational.hpp"

namespace sm {

// Expression trees over {constant, x_k, +, -, *, /, pow(int), exp, sin,
// cos, log}. Nodes are immutable and hash-consed; differentiation is
// closed on the node set, so arbitrary mixed partials stay exact.

enum class ExprOp { Const, Var, Add, Sub, Mul, Div, Pow, Neg, Exp, Sin, Cos, Log };

struct ExprNode;
using ExprPtr = std::shared_ptr<const ExprNode>;

struct ExprNode {
    ExprOp op;
    Rat value;         // Const
    int var = 0;       // Var (0-based)
    int exponent = 0;  // Pow
    ExprPtr a, b;
};

ExprPtr expr_const(Rat v);
ExprPtr expr_var(int k);
ExprPtr expr_add(ExprPtr a, ExprPtr b);
ExprPtr expr_sub(ExprPtr a, ExprPtr b);
ExprPtr expr_mul(ExprPtr a, ExprPtr b);
ExprPtr expr_div(ExprPtr a, ExprPtr b);
ExprPtr expr_pow(ExprPtr a, int n);
ExprPtr expr_neg(ExprPtr a);
ExprPtr expr_exp(ExprPtr a);
ExprPtr expr_sin(ExprPtr a);
ExprPtr expr_cos(ExprPtr a);
ExprPtr expr_log(ExprPtr a);

ExprPtr expr_diff(const ExprPtr& e, int var);

double expr_eval(const ExprPtr& e, std::span<const double> x);

// Exact evaluation; empty when the tree contains a transcendental node or
// hits a zero denominator.
std::optional<Rat> expr_eval_rat(const ExprPtr& e, const RatVec& x);

// Replaces x_k by sum_j A[k][j] y_j + b[k]; the result lives on the y
// variables.
ExprPtr expr_substitute_affine(const ExprPtr& e, const RatMat& A, const RatVec& b);

struct ParseError : std::runtime_error {
    size_t position;
    ParseError(const std::string& msg, size_t pos)
        : std::runtime_error(msg + " at position " + std::to_string(pos)), position(pos) {}
};

// Grammar: expr := term (('+'|'-') term)*; term := factor (('*'|'/') factor)*;
// factor := atom ('^' INT)?; atom := NUMBER | VAR | FUNC '(' expr ')' |
// '(' expr ')' | '-' atom; VAR := 'x' DIGIT+; FUNC in {exp,sin,cos,log}.
// '^' binds tighter than unary minus, so -x1^2 is -(x1^2).
ExprPtr parse_expression(std::string_view src, int dim);

using MIdx = std::vector<int>;

inline int midx_order(const MIdx& a) {
    int s = 0;
    for (int v : a) s += v;
    return s;
}

// An integrand with exact mixed partials up to max_order, obtained by
// repeated symbolic differentiation of an immutable expression tree.
class ScalarField {
  public:
    ScalarField(int dim, ExprPtr expr, int max_order = 16);

    static ScalarField parse(std::string_view src, int dim, int max_order = 16);

    int dim() const { return dim_; }
    int max_order() const { return max_order_; }
    const ExprPtr& expr() const { return expr_; }

    // Derivative tree for the multi-index alpha (cached).
    ExprPtr partial(const MIdx& alpha) const;

    double eval(std::span<const double> x) const { return expr_eval(expr_, x); }
    double eval_partial(const MIdx& alpha, std::span<const double> x) const;

    // g(y) = f(Ay + b): A has dim() rows; the new field lives on A's
    // column count many variables.
    ScalarField compose_affine(const RatMat& A, const RatVec& b) const;

  private:
    int dim_;
    ExprPtr expr_;
    int max_order_;
    mutable std::map<MIdx, ExprPtr> derivative_cache_;
    mutable std::mutex cache_mutex_;
};

}  // namespace sm
