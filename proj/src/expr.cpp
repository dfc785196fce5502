#include "warplag/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <utility>
#include <vector>

#include "warplag/errors.hpp"

namespace warplag {

namespace {

struct ConstNode final : Expr {
    double v;
    explicit ConstNode(double x) : v(x) {}
    double eval(double) const override { return v; }
    Jet eval_jet(const Jet& t) const override { return Jet::constant(v, t.dirs()); }
    bool depends_on_t() const override { return false; }
};

struct VarNode final : Expr {
    double eval(double t) const override { return t; }
    Jet eval_jet(const Jet& t) const override { return t; }
    bool depends_on_t() const override { return true; }
};

enum class BinOp { Add, Sub, Mul, Div };

struct BinNode final : Expr {
    BinOp op;
    ExprPtr a, b;
    BinNode(BinOp o, ExprPtr x, ExprPtr y) : op(o), a(std::move(x)), b(std::move(y)) {}
    double eval(double t) const override {
        const double x = a->eval(t), y = b->eval(t);
        switch (op) {
            case BinOp::Add: return x + y;
            case BinOp::Sub: return x - y;
            case BinOp::Mul: return x * y;
            case BinOp::Div: return x / y;
        }
        return 0.0;
    }
    Jet eval_jet(const Jet& t) const override {
        const Jet x = a->eval_jet(t), y = b->eval_jet(t);
        switch (op) {
            case BinOp::Add: return x + y;
            case BinOp::Sub: return x - y;
            case BinOp::Mul: return x * y;
            case BinOp::Div: return x / y;
        }
        return Jet(t.dirs());
    }
    bool depends_on_t() const override { return a->depends_on_t() || b->depends_on_t(); }
};

struct NegNode final : Expr {
    ExprPtr a;
    explicit NegNode(ExprPtr x) : a(std::move(x)) {}
    double eval(double t) const override { return -a->eval(t); }
    Jet eval_jet(const Jet& t) const override { return -a->eval_jet(t); }
    bool depends_on_t() const override { return a->depends_on_t(); }
};

struct PowNode final : Expr {
    ExprPtr a;
    int n;
    PowNode(ExprPtr x, int e) : a(std::move(x)), n(e) {}
    double eval(double t) const override { return std::pow(a->eval(t), n); }
    Jet eval_jet(const Jet& t) const override { return pow_int(a->eval_jet(t), n); }
    bool depends_on_t() const override { return a->depends_on_t(); }
};

enum class Fn { Sin, Cos, Exp, Sqrt, Log, Atan };

struct FnNode final : Expr {
    Fn fn;
    ExprPtr a;
    FnNode(Fn f, ExprPtr x) : fn(f), a(std::move(x)) {}
    double eval(double t) const override {
        const double x = a->eval(t);
        switch (fn) {
            case Fn::Sin: return std::sin(x);
            case Fn::Cos: return std::cos(x);
            case Fn::Exp: return std::exp(x);
            case Fn::Sqrt: return std::sqrt(x);
            case Fn::Log: return std::log(x);
            case Fn::Atan: return std::atan(x);
        }
        return 0.0;
    }
    Jet eval_jet(const Jet& t) const override {
        const Jet x = a->eval_jet(t);
        switch (fn) {
            case Fn::Sin: return sin(x);
            case Fn::Cos: return cos(x);
            case Fn::Exp: return exp(x);
            case Fn::Sqrt: return sqrt(x);
            case Fn::Log: return log(x);
            case Fn::Atan: return atan(x);
        }
        return Jet(t.dirs());
    }
    bool depends_on_t() const override { return a->depends_on_t(); }
};

class Parser {
public:
    explicit Parser(std::string_view text) : s_(text) {}

    ExprPtr parse() {
        ExprPtr e = sum();
        skip_ws();
        if (pos_ != s_.size()) fail("unexpected trailing input");
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& what) const {
        throw ConfigError("expression error at offset " + std::to_string(pos_) + ": " + what);
    }

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool consume(char c) {
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    char peek() {
        skip_ws();
        return pos_ < s_.size() ? s_[pos_] : '\0';
    }

    ExprPtr sum() {
        ExprPtr e = consume('-') ? std::make_shared<NegNode>(term()) : term();
        for (;;) {
            if (consume('+'))
                e = std::make_shared<BinNode>(BinOp::Add, e, term());
            else if (consume('-'))
                e = std::make_shared<BinNode>(BinOp::Sub, e, term());
            else
                return e;
        }
    }

    ExprPtr term() {
        ExprPtr e = power();
        for (;;) {
            if (consume('*'))
                e = std::make_shared<BinNode>(BinOp::Mul, e, power());
            else if (consume('/'))
                e = std::make_shared<BinNode>(BinOp::Div, e, power());
            else
                return e;
        }
    }

    ExprPtr power() {
        ExprPtr base = atom();
        if (!consume('^')) return base;
        skip_ws();
        const bool neg = consume('-');
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (pos_ == start) fail("expected integer exponent");
        const int n = std::atoi(std::string(s_.substr(start, pos_ - start)).c_str());
        return std::make_shared<PowNode>(base, neg ? -n : n);
    }

    ExprPtr atom() {
        skip_ws();
        if (pos_ >= s_.size()) fail("unexpected end of input");
        const char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            ExprPtr e = sum();
            if (!consume(')')) fail("expected ')'");
            return e;
        }
        if (c == '-') {
            ++pos_;
            return std::make_shared<NegNode>(atom());
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
        fail(std::string("unexpected character '") + c + "'");
    }

    ExprPtr number() {
        const char* begin = s_.data() + pos_;
        char* end = nullptr;
        const double v = std::strtod(begin, &end);
        if (end == begin) fail("malformed number");
        pos_ += static_cast<std::size_t>(end - begin);
        return std::make_shared<ConstNode>(v);
    }

    ExprPtr identifier() {
        const std::size_t start = pos_;
        while (pos_ < s_.size() &&
               (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
            ++pos_;
        const std::string name(s_.substr(start, pos_ - start));
        if (name == "t") return std::make_shared<VarNode>();
        if (name == "pi") return std::make_shared<ConstNode>(std::acos(-1.0));
        static const std::vector<std::pair<std::string, Fn>> fns = {
            {"sin", Fn::Sin}, {"cos", Fn::Cos},  {"exp", Fn::Exp},
            {"sqrt", Fn::Sqrt}, {"log", Fn::Log}, {"atan", Fn::Atan},
        };
        for (const auto& [fname, fn] : fns) {
            if (name == fname) {
                if (!consume('(')) fail("expected '(' after '" + name + "'");
                ExprPtr arg = sum();
                if (!consume(')')) fail("expected ')'");
                return std::make_shared<FnNode>(fn, arg);
            }
        }
        pos_ = start;
        fail("unknown identifier '" + name + "'");
    }

    std::string_view s_;
    std::size_t pos_ = 0;
};

} // namespace

ExprPtr parse_expr(std::string_view text) { return Parser(text).parse(); }

double eval_const_expr(std::string_view text) {
    ExprPtr e = parse_expr(text);
    if (e->depends_on_t()) throw ConfigError("expression must be constant (mentions t)");
    return e->eval(0.0);
}

} // namespace warplag
