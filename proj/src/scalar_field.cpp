#include "sm/scalar_field.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <functional>
#include <unordered_map>

namespace sm {

namespace {

struct InternKey {
    ExprOp op;
    const ExprNode* a;
    const ExprNode* b;
    int aux;             // var index or exponent
    std::string value;   // canonical string of the constant

    bool operator==(const InternKey&) const = default;
};

struct InternKeyHash {
    size_t operator()(const InternKey& k) const {
        size_t h = std::hash<int>()(static_cast<int>(k.op));
        auto mix = [&h](size_t v) { h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2); };
        mix(std::hash<const void*>()(k.a));
        mix(std::hash<const void*>()(k.b));
        mix(std::hash<int>()(k.aux));
        mix(std::hash<std::string>()(k.value));
        return h;
    }
};

ExprPtr intern(ExprOp op, Rat value, int aux, ExprPtr a, ExprPtr b) {
    static std::unordered_map<InternKey, ExprPtr, InternKeyHash> table;
    static std::mutex mutex;
    InternKey key{op, a.get(), b.get(), aux, op == ExprOp::Const ? value.get_str() : std::string()};
    std::lock_guard lock(mutex);
    auto it = table.find(key);
    if (it != table.end()) return it->second;
    auto node = std::make_shared<ExprNode>();
    node->op = op;
    node->value = std::move(value);
    node->var = op == ExprOp::Var ? aux : 0;
    node->exponent = op == ExprOp::Pow ? aux : 0;
    node->a = std::move(a);
    node->b = std::move(b);
    table.emplace(key, node);
    return node;
}

bool is_const(const ExprPtr& e, long v) {
    return e->op == ExprOp::Const && e->value == v;
}

}  // namespace

ExprPtr expr_const(Rat v) {
    v.canonicalize();
    return intern(ExprOp::Const, std::move(v), 0, nullptr, nullptr);
}

ExprPtr expr_var(int k) { return intern(ExprOp::Var, Rat(0), k, nullptr, nullptr); }

ExprPtr expr_add(ExprPtr a, ExprPtr b) {
    if (a->op == ExprOp::Const && b->op == ExprOp::Const) return expr_const(a->value + b->value);
    if (is_const(a, 0)) return b;
    if (is_const(b, 0)) return a;
    return intern(ExprOp::Add, Rat(0), 0, std::move(a), std::move(b));
}

ExprPtr expr_sub(ExprPtr a, ExprPtr b) {
    if (a->op == ExprOp::Const && b->op == ExprOp::Const) return expr_const(a->value - b->value);
    if (is_const(b, 0)) return a;
    if (is_const(a, 0)) return expr_neg(std::move(b));
    if (a == b) return expr_const(Rat(0));
    return intern(ExprOp::Sub, Rat(0), 0, std::move(a), std::move(b));
}

ExprPtr expr_mul(ExprPtr a, ExprPtr b) {
    if (a->op == ExprOp::Const && b->op == ExprOp::Const) return expr_const(a->value * b->value);
    if (is_const(a, 0) || is_const(b, 0)) return expr_const(Rat(0));
    if (is_const(a, 1)) return b;
    if (is_const(b, 1)) return a;
    return intern(ExprOp::Mul, Rat(0), 0, std::move(a), std::move(b));
}

ExprPtr expr_div(ExprPtr a, ExprPtr b) {
    if (a->op == ExprOp::Const && b->op == ExprOp::Const && b->value != 0)
        return expr_const(a->value / b->value);
    if (is_const(a, 0)) return expr_const(Rat(0));
    if (is_const(b, 1)) return a;
    return intern(ExprOp::Div, Rat(0), 0, std::move(a), std::move(b));
}

ExprPtr expr_pow(ExprPtr a, int n) {
    if (n == 0) return expr_const(Rat(1));
    if (n == 1) return a;
    if (a->op == ExprOp::Const) {
        if (n > 0) {
            Rat r(1);
            for (int i = 0; i < n; ++i) r *= a->value;
            return expr_const(r);
        }
        if (a->value != 0) {
            Rat r(1);
            for (int i = 0; i < -n; ++i) r *= a->value;
            return expr_const(Rat(1) / r);
        }
    }
    return intern(ExprOp::Pow, Rat(0), n, std::move(a), nullptr);
}

ExprPtr expr_neg(ExprPtr a) {
    if (a->op == ExprOp::Const) return expr_const(-a->value);
    if (a->op == ExprOp::Neg) return a->a;
    return intern(ExprOp::Neg, Rat(0), 0, std::move(a), nullptr);
}

ExprPtr expr_exp(ExprPtr a) {
    if (is_const(a, 0)) return expr_const(Rat(1));
    return intern(ExprOp::Exp, Rat(0), 0, std::move(a), nullptr);
}

ExprPtr expr_sin(ExprPtr a) {
    if (is_const(a, 0)) return expr_const(Rat(0));
    return intern(ExprOp::Sin, Rat(0), 0, std::move(a), nullptr);
}

ExprPtr expr_cos(ExprPtr a) {
    if (is_const(a, 0)) return expr_const(Rat(1));
    return intern(ExprOp::Cos, Rat(0), 0, std::move(a), nullptr);
}

ExprPtr expr_log(ExprPtr a) {
    if (is_const(a, 1)) return expr_const(Rat(0));
    return intern(ExprOp::Log, Rat(0), 0, std::move(a), nullptr);
}

ExprPtr expr_diff(const ExprPtr& e, int var) {
    switch (e->op) {
        case ExprOp::Const: return expr_const(Rat(0));
        case ExprOp::Var: return expr_const(Rat(e->var == var ? 1 : 0));
        case ExprOp::Add: return expr_add(expr_diff(e->a, var), expr_diff(e->b, var));
        case ExprOp::Sub: return expr_sub(expr_diff(e->a, var), expr_diff(e->b, var));
        case ExprOp::Mul:
            return expr_add(expr_mul(expr_diff(e->a, var), e->b),
                            expr_mul(e->a, expr_diff(e->b, var)));
        case ExprOp::Div:
            return expr_div(expr_sub(expr_mul(expr_diff(e->a, var), e->b),
                                     expr_mul(e->a, expr_diff(e->b, var))),
                            expr_pow(e->b, 2));
        case ExprOp::Pow:
            return expr_mul(expr_mul(expr_const(Rat(e->exponent)), expr_pow(e->a, e->exponent - 1)),
                            expr_diff(e->a, var));
        case ExprOp::Neg: return expr_neg(expr_diff(e->a, var));
        case ExprOp::Exp: return expr_mul(e, expr_diff(e->a, var));
        case ExprOp::Sin: return expr_mul(expr_cos(e->a), expr_diff(e->a, var));
        case ExprOp::Cos: return expr_neg(expr_mul(expr_sin(e->a), expr_diff(e->a, var)));
        case ExprOp::Log: return expr_div(expr_diff(e->a, var), e->a);
    }
    throw std::logic_error("expr_diff: unreachable");
}

double expr_eval(const ExprPtr& e, std::span<const double> x) {
    switch (e->op) {
        case ExprOp::Const: return to_double(e->value);
        case ExprOp::Var: return x[e->var];
        case ExprOp::Add: return expr_eval(e->a, x) + expr_eval(e->b, x);
        case ExprOp::Sub: return expr_eval(e->a, x) - expr_eval(e->b, x);
        case ExprOp::Mul: return expr_eval(e->a, x) * expr_eval(e->b, x);
        case ExprOp::Div: return expr_eval(e->a, x) / expr_eval(e->b, x);
        case ExprOp::Pow: return std::pow(expr_eval(e->a, x), e->exponent);
        case ExprOp::Neg: return -expr_eval(e->a, x);
        case ExprOp::Exp: return std::exp(expr_eval(e->a, x));
        case ExprOp::Sin: return std::sin(expr_eval(e->a, x));
        case ExprOp::Cos: return std::cos(expr_eval(e->a, x));
        case ExprOp::Log: return std::log(expr_eval(e->a, x));
    }
    throw std::logic_error("expr_eval: unreachable");
}

std::optional<Rat> expr_eval_rat(const ExprPtr& e, const RatVec& x) {
    switch (e->op) {
        case ExprOp::Const: return e->value;
        case ExprOp::Var: return x[e->var];
        case ExprOp::Neg: {
            auto a = expr_eval_rat(e->a, x);
            if (!a) return std::nullopt;
            return -*a;
        }
        case ExprOp::Pow: {
            auto a = expr_eval_rat(e->a, x);
            if (!a) return std::nullopt;
            int n = e->exponent;
            if (n < 0 && *a == 0) return std::nullopt;
            Rat r(1);
            for (int i = 0; i < std::abs(n); ++i) r *= *a;
            return n >= 0 ? r : Rat(1) / r;
        }
        case ExprOp::Add:
        case ExprOp::Sub:
        case ExprOp::Mul:
        case ExprOp::Div: {
            auto a = expr_eval_rat(e->a, x);
            auto b = expr_eval_rat(e->b, x);
            if (!a || !b) return std::nullopt;
            switch (e->op) {
                case ExprOp::Add: return *a + *b;
                case ExprOp::Sub: return *a - *b;
                case ExprOp::Mul: return *a * *b;
                default:
                    if (*b == 0) return std::nullopt;
                    return *a / *b;
            }
        }
        default: return std::nullopt;  // transcendental
    }
}

ExprPtr expr_substitute_affine(const ExprPtr& e, const RatMat& A, const RatVec& b) {
    switch (e->op) {
        case ExprOp::Const: return e;
        case ExprOp::Var: {
            size_t k = static_cast<size_t>(e->var);
            ExprPtr acc = expr_const(b[k]);
            for (size_t j = 0; j < A[k].size(); ++j)
                acc = expr_add(acc, expr_mul(expr_const(A[k][j]), expr_var(static_cast<int>(j))));
            return acc;
        }
        case ExprOp::Add: return expr_add(expr_substitute_affine(e->a, A, b), expr_substitute_affine(e->b, A, b));
        case ExprOp::Sub: return expr_sub(expr_substitute_affine(e->a, A, b), expr_substitute_affine(e->b, A, b));
        case ExprOp::Mul: return expr_mul(expr_substitute_affine(e->a, A, b), expr_substitute_affine(e->b, A, b));
        case ExprOp::Div: return expr_div(expr_substitute_affine(e->a, A, b), expr_substitute_affine(e->b, A, b));
        case ExprOp::Pow: return expr_pow(expr_substitute_affine(e->a, A, b), e->exponent);
        case ExprOp::Neg: return expr_neg(expr_substitute_affine(e->a, A, b));
        case ExprOp::Exp: return expr_exp(expr_substitute_affine(e->a, A, b));
        case ExprOp::Sin: return expr_sin(expr_substitute_affine(e->a, A, b));
        case ExprOp::Cos: return expr_cos(expr_substitute_affine(e->a, A, b));
        case ExprOp::Log: return expr_log(expr_substitute_affine(e->a, A, b));
    }
    throw std::logic_error("expr_substitute_affine: unreachable");
}

namespace {

class Parser {
  public:
    Parser(std::string_view src, int dim) : src_(src), dim_(dim) {}

    ExprPtr run() {
        ExprPtr e = parse_expr();
        skip_ws();
        if (pos_ != src_.size()) throw ParseError("unexpected trailing input", pos_);
        return e;
    }

  private:
    std::string_view src_;
    int dim_;
    size_t pos_ = 0;

    void skip_ws() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }

    bool eat(char c) {
        skip_ws();
        if (pos_ < src_.size() && src_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    char peek() {
        skip_ws();
        return pos_ < src_.size() ? src_[pos_] : '\0';
    }

    ExprPtr parse_expr() {
        ExprPtr e = parse_term();
        for (;;) {
            if (eat('+')) e = expr_add(e, parse_term());
            else if (eat('-')) e = expr_sub(e, parse_term());
            else return e;
        }
    }

    ExprPtr parse_term() {
        ExprPtr e = parse_factor();
        for (;;) {
            if (eat('*')) e = expr_mul(e, parse_factor());
            else if (eat('/')) e = expr_div(e, parse_factor());
            else return e;
        }
    }

    ExprPtr parse_factor() {
        // Unary minus binds looser than '^': -x1^2 = -(x1^2).
        if (eat('-')) return expr_neg(parse_factor());
        ExprPtr e = parse_atom();
        if (eat('^')) return expr_pow(e, parse_int_literal());
        return e;
    }

    int parse_int_literal() {
        skip_ws();
        bool negative = eat('-');
        skip_ws();
        size_t start = pos_;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        if (pos_ == start) throw ParseError("expected integer exponent", pos_);
        int v = std::stoi(std::string(src_.substr(start, pos_ - start)));
        return negative ? -v : v;
    }

    ExprPtr parse_atom() {
        skip_ws();
        if (pos_ >= src_.size()) throw ParseError("unexpected end of input", pos_);
        char c = src_[pos_];
        if (c == '(') {
            ++pos_;
            ExprPtr e = parse_expr();
            if (!eat(')')) throw ParseError("expected ')'", pos_);
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c))) return parse_identifier();
        throw ParseError(std::string("unexpected character '") + c + "'", pos_);
    }

    ExprPtr parse_number() {
        size_t start = pos_;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        mpz_class num(std::string(src_.substr(start, pos_ - start)));
        mpz_class den(1);
        if (pos_ < src_.size() && src_[pos_] == '.') {
            ++pos_;
            size_t frac_start = pos_;
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
            if (pos_ == frac_start) throw ParseError("expected digits after '.'", pos_);
            for (size_t i = frac_start; i < pos_; ++i) {
                num = num * 10 + (src_[i] - '0');
                den *= 10;
            }
        }
        return expr_const(Rat(num, den));
    }

    ExprPtr parse_identifier() {
        size_t start = pos_;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])))) ++pos_;
        std::string name(src_.substr(start, pos_ - start));
        if (name.size() >= 2 && name[0] == 'x' &&
            std::all_of(name.begin() + 1, name.end(),
                        [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)); })) {
            int idx = std::stoi(name.substr(1));
            if (idx < 1 || idx > dim_)
                throw ParseError("unknown variable '" + name + "' (dimension is " +
                                     std::to_string(dim_) + ")",
                                 start);
            return expr_var(idx - 1);
        }
        ExprPtr (*fn)(ExprPtr) = nullptr;
        if (name == "exp") fn = expr_exp;
        else if (name == "sin") fn = expr_sin;
        else if (name == "cos") fn = expr_cos;
        else if (name == "log") fn = expr_log;
        if (!fn) throw ParseError("unknown identifier '" + name + "'", start);
        if (!eat('(')) throw ParseError("expected '(' after function '" + name + "'", pos_);
        ExprPtr arg = parse_expr();
        if (peek() == ',') throw ParseError("function '" + name + "' takes one argument", pos_);
        if (!eat(')')) throw ParseError("expected ')'", pos_);
        return fn(arg);
    }
};

}  // namespace

ExprPtr parse_expression(std::string_view src, int dim) { return Parser(src, dim).run(); }

ScalarField::ScalarField(int dim, ExprPtr expr, int max_order)
    : dim_(dim), expr_(std::move(expr)), max_order_(max_order) {}

ScalarField ScalarField::parse(std::string_view src, int dim, int max_order) {
    return ScalarField(dim, parse_expression(src, dim), max_order);
}

ExprPtr ScalarField::partial(const MIdx& alpha) const {
    if (static_cast<int>(alpha.size()) != dim_)
        throw std::invalid_argument("ScalarField::partial: multi-index dimension mismatch");
    if (midx_order(alpha) > max_order_)
        throw std::invalid_argument("ScalarField::partial: derivative order exceeds max_order");
    std::lock_guard lock(cache_mutex_);
    auto it = derivative_cache_.find(alpha);
    if (it != derivative_cache_.end()) return it->second;
    // Build from the nearest cached ancestor, one derivative at a time.
    MIdx cur(dim_, 0);
    ExprPtr e = expr_;
    for (int k = 0; k < dim_; ++k) {
        for (int r = 0; r < alpha[k]; ++r) {
            ++cur[k];
            auto hit = derivative_cache_.find(cur);
            if (hit != derivative_cache_.end()) {
                e = hit->second;
            } else {
                e = expr_diff(e, k);
                derivative_cache_.emplace(cur, e);
            }
        }
    }
    return e;
}

double ScalarField::eval_partial(const MIdx& alpha, std::span<const double> x) const {
    return expr_eval(partial(alpha), x);
}

ScalarField ScalarField::compose_affine(const RatMat& A, const RatVec& b) const {
    if (static_cast<int>(A.size()) != dim_ || static_cast<int>(b.size()) != dim_)
        throw std::invalid_argument("compose_affine: shape mismatch");
    size_t new_dim = A.empty() ? 0 : A[0].size();
    for (const auto& row : A)
        if (row.size() != new_dim) throw std::invalid_argument("compose_affine: ragged matrix");
    return ScalarField(static_cast<int>(new_dim), expr_substitute_affine(expr_, A, b), max_order_);
}

}  // namespace sm
