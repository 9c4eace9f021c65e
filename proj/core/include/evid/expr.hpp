#pragma once

#include "evid/rational.hpp"
#include "evid/scalar.hpp"

#include <memory>
#include <span>
#include <string>
#include <string_view>

namespace evid {

/// Parsed arithmetic expression over u1..un and rational literals.
///
///   expr   := term (('+'|'-') term)*
///   term   := factor (('*'|'/') factor)*
///   factor := ('+'|'-') factor | base ('^' uint)?
///   base   := 'u' uint | rational | '(' expr ')'
struct ExprNode {
    enum class Kind { Constant, Variable, Add, Sub, Mul, Div, Pow, Neg };

    Kind kind = Kind::Constant;
    Rational value;
    std::size_t variable = 0;
    unsigned exponent = 0;
    std::shared_ptr<const ExprNode> lhs, rhs;
};

class ExprTree {
public:
    ExprTree(std::shared_ptr<const ExprNode> root, std::size_t nvars) : root_(std::move(root)), nvars_(nvars) {}

    const ExprNode& root() const noexcept { return *root_; }
    std::size_t nvars() const noexcept { return nvars_; }
    bool has_division() const;

private:
    std::shared_ptr<const ExprNode> root_;
    std::size_t nvars_;
};

/// Raises SyntaxError (with the character offset) or UnknownVariable when an
/// index is 0 or exceeds n.
ExprTree parse(std::string_view src, std::size_t n);

/// Builds the expression on `backend`. Division is exact only on backends that
/// support it; the Poly backend accepts division by nonzero constants and
/// raises UnsupportedDivision otherwise. With `index_map`, variable u_i of the
/// expression becomes the backend variable index_map[i-1].
ScalarFn lower(const ExprTree& tree, const Backend& backend, std::span<const std::size_t> index_map = {});

/// parse + lower, for one-off inputs.
ScalarFn parse_scalar(std::string_view src, const Backend& backend);

/// Exact polynomial from an expression (Poly backend).
Poly parse_poly(std::string_view src, std::size_t n);

}  // namespace evid
