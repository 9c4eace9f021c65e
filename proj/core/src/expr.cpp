#include "evid/expr.hpp"

#include "evid/error.hpp"

#include <cctype>
#include <functional>

namespace evid {

namespace {

using NodePtr = std::shared_ptr<const ExprNode>;

class Parser {
public:
    Parser(std::string_view src, std::size_t n) : src_(src), n_(n) {}

    NodePtr run()
    {
        NodePtr e = expr();
        skip_space();
        if (pos_ != src_.size()) error("unexpected character '" + std::string(1, src_[pos_]) + "'");
        return e;
    }

private:
    [[noreturn]] void error(const std::string& what) const
    {
        throw Error(Errc::SyntaxError, what + " at position " + std::to_string(pos_)).with_position(pos_);
    }

    void skip_space()
    {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }

    bool accept(char c)
    {
        skip_space();
        if (pos_ < src_.size() && src_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    static NodePtr binary(ExprNode::Kind kind, NodePtr a, NodePtr b)
    {
        auto node = std::make_shared<ExprNode>();
        node->kind = kind;
        node->lhs = std::move(a);
        node->rhs = std::move(b);
        return node;
    }

    NodePtr expr()
    {
        NodePtr lhs = term();
        for (;;) {
            if (accept('+')) lhs = binary(ExprNode::Kind::Add, lhs, term());
            else if (accept('-')) lhs = binary(ExprNode::Kind::Sub, lhs, term());
            else return lhs;
        }
    }

    NodePtr term()
    {
        NodePtr lhs = factor();
        for (;;) {
            if (accept('*')) lhs = binary(ExprNode::Kind::Mul, lhs, factor());
            else if (accept('/')) lhs = binary(ExprNode::Kind::Div, lhs, factor());
            else return lhs;
        }
    }

    NodePtr factor()
    {
        skip_space();
        if (pos_ < src_.size() && (src_[pos_] == '-' || src_[pos_] == '+')) {
            const bool negate = src_[pos_] == '-';
            ++pos_;
            NodePtr inner = factor();
            if (!negate) return inner;
            auto node = std::make_shared<ExprNode>();
            node->kind = ExprNode::Kind::Neg;
            node->lhs = std::move(inner);
            return node;
        }
        NodePtr b = base();
        if (accept('^')) {
            skip_space();
            auto node = std::make_shared<ExprNode>();
            node->kind = ExprNode::Kind::Pow;
            node->exponent = static_cast<unsigned>(unsigned_integer("exponent"));
            node->lhs = std::move(b);
            return node;
        }
        return b;
    }

    std::size_t unsigned_integer(const char* what)
    {
        const std::size_t start = pos_;
        std::size_t value = 0;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
            value = value * 10 + static_cast<std::size_t>(src_[pos_] - '0');
            if (value > 1'000'000) error(std::string(what) + " too large");
            ++pos_;
        }
        if (pos_ == start) error(std::string("expected ") + what);
        return value;
    }

    NodePtr base()
    {
        skip_space();
        if (pos_ >= src_.size()) error("unexpected end of input");
        const char c = src_[pos_];
        if (c == '(') {
            ++pos_;
            NodePtr e = expr();
            if (!accept(')')) error("expected ')'");
            return e;
        }
        if (c == 'u') {
            const std::size_t at = pos_;
            ++pos_;
            const std::size_t index = unsigned_integer("variable index");
            if (index == 0 || index > n_)
                throw Error(Errc::UnknownVariable, "unknown variable u" + std::to_string(index) + " (dimension " +
                                                       std::to_string(n_) + ")")
                    .with_position(at)
                    .with_indices({index});
            auto node = std::make_shared<ExprNode>();
            node->kind = ExprNode::Kind::Variable;
            node->variable = index;
            return node;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return literal();
        error("unexpected character '" + std::string(1, c) + "'");
    }

    NodePtr literal()
    {
        // A literal is digits with an optional fraction; "a/b" with integer b
        // is handled by the term rule, which yields the same exact value.
        const std::size_t start = pos_;
        while (pos_ < src_.size() && (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.')) ++pos_;
        auto node = std::make_shared<ExprNode>();
        node->kind = ExprNode::Kind::Constant;
        try {
            node->value = parse_rational(src_.substr(start, pos_ - start));
        } catch (const Error&) {
            pos_ = start;
            error("malformed number");
        }
        return node;
    }

    std::string_view src_;
    std::size_t n_;
    std::size_t pos_ = 0;
};

bool contains_division(const ExprNode& node)
{
    if (node.kind == ExprNode::Kind::Div) return true;
    return (node.lhs && contains_division(*node.lhs)) || (node.rhs && contains_division(*node.rhs));
}

}  // namespace

bool ExprTree::has_division() const
{
    return contains_division(*root_);
}

ExprTree parse(std::string_view src, std::size_t n)
{
    return ExprTree(Parser(src, n).run(), n);
}

ScalarFn lower(const ExprTree& tree, const Backend& backend, std::span<const std::size_t> index_map)
{
    if (!index_map.empty() && index_map.size() < tree.nvars())
        fail(Errc::InvalidInput, "index map shorter than expression dimension");
    if (index_map.empty() && tree.nvars() > backend.nvars())
        fail(Errc::BackendMismatch, "expression dimension exceeds backend dimension");

    std::function<ScalarFn(const ExprNode&)> go = [&](const ExprNode& node) -> ScalarFn {
        using K = ExprNode::Kind;
        switch (node.kind) {
        case K::Constant: return backend.constant(node.value);
        case K::Variable: return backend.variable(index_map.empty() ? node.variable : index_map[node.variable - 1]);
        case K::Add: return go(*node.lhs) + go(*node.rhs);
        case K::Sub: return go(*node.lhs) - go(*node.rhs);
        case K::Mul: return go(*node.lhs) * go(*node.rhs);
        case K::Neg: return -go(*node.lhs);
        case K::Pow: {
            ScalarFn base = go(*node.lhs);
            ScalarFn out = backend.one();
            for (unsigned k = 0; k < node.exponent; ++k) out = out * base;
            return out;
        }
        case K::Div: {
            ScalarFn num = go(*node.lhs);
            ScalarFn den = go(*node.rhs);
            if (backend.kind() == BackendKind::Poly) {
                const Poly& d = den.as_poly();
                if (!d.is_constant())
                    fail(Errc::UnsupportedDivision, "division by a non-constant on the polynomial backend");
                if (d.is_zero()) fail(Errc::DivisionByZeroFunction, "division by zero");
            }
            return num / den;
        }
        }
        fail(Errc::InvalidInput, "corrupt expression node");
    };
    return go(tree.root());
}

ScalarFn parse_scalar(std::string_view src, const Backend& backend)
{
    return lower(parse(src, backend.nvars()), backend);
}

Poly parse_poly(std::string_view src, std::size_t n)
{
    return parse_scalar(src, Backend::poly(n)).as_poly();
}

}  // namespace evid
