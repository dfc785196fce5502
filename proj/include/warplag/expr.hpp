#pragma once

#include <memory>
#include <string>
#include <string_view>

#include "warplag/jet.hpp"

namespace warplag {

/// Parsed scalar expression in one variable t.  Grammar: +, -, *, /, unary
/// minus, parentheses, integer ^ powers, the functions sin/cos/exp/sqrt/log/
/// atan, the constant pi, and numeric literals.
class Expr {
public:
    virtual ~Expr() = default;
    virtual double eval(double t) const = 0;
    virtual Jet eval_jet(const Jet& t) const = 0;
    virtual bool depends_on_t() const = 0;
};

using ExprPtr = std::shared_ptr<const Expr>;

/// Parse `text`; throws ConfigError carrying the byte offset on syntax errors
/// or unknown identifiers.
ExprPtr parse_expr(std::string_view text);

/// Parse and evaluate an expression that must not mention t (radii, rates...).
double eval_const_expr(std::string_view text);

} // namespace warplag
