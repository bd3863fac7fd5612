// Copyright (c) the spectral-count contributors.
// SPDX-License-Identifier: Apache-2.0

#include "spectral/expression.hpp"

#include <charconv>
#include <cmath>
#include <vector>

namespace spectral {

namespace detail {

enum class NodeKind { Number, VarX, VarLambda, Negate, Add, Sub, Mul, Div, Pow, Call };
enum class Fn { Sin, Cos, Exp, Sqrt, Abs };

struct ExprNode {
    NodeKind kind;
    double number = 0.0;
    Fn fn = Fn::Sin;
    std::size_t offset = 0;  // operator / token position for error reporting
    std::shared_ptr<const ExprNode> lhs, rhs;
};

}  // namespace detail

using detail::ExprNode;
using detail::Fn;
using detail::NodeKind;

namespace {

using NodePtr = std::shared_ptr<const ExprNode>;

NodePtr make_node(ExprNode n) { return std::make_shared<const ExprNode>(std::move(n)); }

struct Token {
    enum Kind { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End } kind;
    std::size_t offset;
    double value = 0.0;
    std::string text;
};

class Lexer {
public:
    explicit Lexer(const std::string& src) : src_(src) { advance(); }

    const Token& peek() const { return current_; }
    Token take() {
        Token t = current_;
        advance();
        return t;
    }

private:
    void advance() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        current_.offset = pos_;
        current_.text.clear();
        if (pos_ >= src_.size()) {
            current_.kind = Token::End;
            return;
        }
        const char c = src_[pos_];
        switch (c) {
            case '+': current_.kind = Token::Plus; ++pos_; return;
            case '-': current_.kind = Token::Minus; ++pos_; return;
            case '*': current_.kind = Token::Star; ++pos_; return;
            case '/': current_.kind = Token::Slash; ++pos_; return;
            case '^': current_.kind = Token::Caret; ++pos_; return;
            case '(': current_.kind = Token::LParen; ++pos_; return;
            case ')': current_.kind = Token::RParen; ++pos_; return;
            default: break;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            const char* begin = src_.data() + pos_;
            const char* end = src_.data() + src_.size();
            double value = 0.0;
            auto res = std::from_chars(begin, end, value);
            if (res.ec != std::errc() || res.ptr == begin)
                throw ParseError(pos_, "malformed number");
            current_.kind = Token::Number;
            current_.value = value;
            current_.text.assign(begin, res.ptr);
            pos_ += std::size_t(res.ptr - begin);
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t end = pos_;
            while (end < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[end])) || src_[end] == '_'))
                ++end;
            current_.kind = Token::Ident;
            current_.text = src_.substr(pos_, end - pos_);
            pos_ = end;
            return;
        }
        throw ParseError(pos_, std::string("unexpected character '") + c + "'");
    }

    const std::string& src_;
    std::size_t pos_ = 0;
    Token current_{Token::End, 0, 0.0, {}};
};

class Parser {
public:
    explicit Parser(const std::string& src) : lex_(src) {}

    NodePtr parse() {
        NodePtr e = parse_sum();
        const Token& t = lex_.peek();
        if (t.kind != Token::End)
            throw ParseError(t.offset, "unexpected trailing input");
        return e;
    }

private:
    NodePtr parse_sum() {
        NodePtr lhs = parse_product();
        for (;;) {
            const Token& t = lex_.peek();
            if (t.kind != Token::Plus && t.kind != Token::Minus) return lhs;
            const Token op = lex_.take();
            NodePtr rhs = parse_product();
            ExprNode n;
            n.kind = (op.kind == Token::Plus) ? NodeKind::Add : NodeKind::Sub;
            n.offset = op.offset;
            n.lhs = lhs;
            n.rhs = rhs;
            lhs = make_node(std::move(n));
        }
    }

    NodePtr parse_product() {
        NodePtr lhs = parse_unary();
        for (;;) {
            const Token& t = lex_.peek();
            if (t.kind != Token::Star && t.kind != Token::Slash) return lhs;
            const Token op = lex_.take();
            NodePtr rhs = parse_unary();
            ExprNode n;
            n.kind = (op.kind == Token::Star) ? NodeKind::Mul : NodeKind::Div;
            n.offset = op.offset;
            n.lhs = lhs;
            n.rhs = rhs;
            lhs = make_node(std::move(n));
        }
    }

    NodePtr parse_unary() {
        const Token& t = lex_.peek();
        if (t.kind == Token::Minus) {
            const Token op = lex_.take();
            NodePtr operand = parse_unary();
            ExprNode n;
            n.kind = NodeKind::Negate;
            n.offset = op.offset;
            n.lhs = operand;
            return make_node(std::move(n));
        }
        if (t.kind == Token::Plus) {  // unary plus: skip
            lex_.take();
            return parse_unary();
        }
        return parse_power();
    }

    NodePtr parse_power() {
        NodePtr base = parse_atom();
        const Token& t = lex_.peek();
        if (t.kind != Token::Caret) return base;
        const Token op = lex_.take();
        NodePtr exponent = parse_unary();  // right-associative, allows x^-2
        ExprNode n;
        n.kind = NodeKind::Pow;
        n.offset = op.offset;
        n.lhs = base;
        n.rhs = exponent;
        return make_node(std::move(n));
    }

    NodePtr parse_atom() {
        const Token t = lex_.take();
        switch (t.kind) {
            case Token::Number: {
                ExprNode n;
                n.kind = NodeKind::Number;
                n.number = t.value;
                n.offset = t.offset;
                return make_node(std::move(n));
            }
            case Token::LParen: {
                NodePtr e = parse_sum();
                const Token close = lex_.take();
                if (close.kind != Token::RParen)
                    throw ParseError(close.offset, "expected ')'");
                return e;
            }
            case Token::Ident: {
                if (t.text == "x" || t.text == "lambda") {
                    ExprNode n;
                    n.kind = (t.text == "x") ? NodeKind::VarX : NodeKind::VarLambda;
                    n.offset = t.offset;
                    return make_node(std::move(n));
                }
                Fn fn;
                if (t.text == "sin") fn = Fn::Sin;
                else if (t.text == "cos") fn = Fn::Cos;
                else if (t.text == "exp") fn = Fn::Exp;
                else if (t.text == "sqrt") fn = Fn::Sqrt;
                else if (t.text == "abs") fn = Fn::Abs;
                else throw ParseError(t.offset, "unknown identifier '" + t.text + "'");
                const Token open = lex_.take();
                if (open.kind != Token::LParen)
                    throw ParseError(open.offset, "expected '(' after function name");
                NodePtr arg = parse_sum();
                const Token close = lex_.take();
                if (close.kind != Token::RParen)
                    throw ParseError(close.offset, "expected ')'");
                ExprNode n;
                n.kind = NodeKind::Call;
                n.fn = fn;
                n.offset = t.offset;
                n.lhs = arg;
                return make_node(std::move(n));
            }
            default:
                throw ParseError(t.offset, "expected a value");
        }
    }

    Lexer lex_;
};

double eval_node(const ExprNode& n, double x, double lambda) {
    switch (n.kind) {
        case NodeKind::Number: return n.number;
        case NodeKind::VarX: return x;
        case NodeKind::VarLambda: return lambda;
        case NodeKind::Negate: return -eval_node(*n.lhs, x, lambda);
        case NodeKind::Add: return eval_node(*n.lhs, x, lambda) + eval_node(*n.rhs, x, lambda);
        case NodeKind::Sub: return eval_node(*n.lhs, x, lambda) - eval_node(*n.rhs, x, lambda);
        case NodeKind::Mul: return eval_node(*n.lhs, x, lambda) * eval_node(*n.rhs, x, lambda);
        case NodeKind::Div: {
            const double num = eval_node(*n.lhs, x, lambda);
            const double den = eval_node(*n.rhs, x, lambda);
            if (den == 0.0) throw EvalError(n.offset, "division by zero");
            return num / den;
        }
        case NodeKind::Pow: {
            const double base = eval_node(*n.lhs, x, lambda);
            const double exponent = eval_node(*n.rhs, x, lambda);
            if (base == 0.0 && exponent < 0.0)
                throw EvalError(n.offset, "zero raised to a negative power");
            if (base < 0.0 && exponent != std::floor(exponent))
                throw EvalError(n.offset, "negative base with non-integer exponent");
            const double v = std::pow(base, exponent);
            if (!std::isfinite(v)) throw EvalError(n.offset, "power overflow");
            return v;
        }
        case NodeKind::Call: {
            const double a = eval_node(*n.lhs, x, lambda);
            switch (n.fn) {
                case Fn::Sin: return std::sin(a);
                case Fn::Cos: return std::cos(a);
                case Fn::Exp: {
                    const double v = std::exp(a);
                    if (!std::isfinite(v)) throw EvalError(n.offset, "exp overflow");
                    return v;
                }
                case Fn::Sqrt:
                    if (a < 0.0) throw EvalError(n.offset, "sqrt of a negative value");
                    return std::sqrt(a);
                case Fn::Abs: return std::abs(a);
            }
            throw EvalError(n.offset, "unknown function");
        }
    }
    throw EvalError(n.offset, "unknown node");
}

int precedence(NodeKind k) {
    switch (k) {
        case NodeKind::Add:
        case NodeKind::Sub: return 1;
        case NodeKind::Mul:
        case NodeKind::Div: return 2;
        case NodeKind::Negate: return 3;
        case NodeKind::Pow: return 4;
        default: return 5;
    }
}

std::string format_number(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

void format_node(const ExprNode& n, int parent_prec, bool rhs_of_left_assoc, std::string& out) {
    const int prec = precedence(n.kind);
    const bool parens = prec < parent_prec || (prec == parent_prec && rhs_of_left_assoc);
    if (parens) out.push_back('(');
    switch (n.kind) {
        case NodeKind::Number: out += format_number(n.number); break;
        case NodeKind::VarX: out += "x"; break;
        case NodeKind::VarLambda: out += "lambda"; break;
        case NodeKind::Negate:
            out.push_back('-');
            format_node(*n.lhs, precedence(NodeKind::Negate), false, out);
            break;
        case NodeKind::Add:
        case NodeKind::Sub:
            format_node(*n.lhs, prec, false, out);
            out += (n.kind == NodeKind::Add) ? " + " : " - ";
            format_node(*n.rhs, prec, true, out);
            break;
        case NodeKind::Mul:
        case NodeKind::Div:
            format_node(*n.lhs, prec, false, out);
            out += (n.kind == NodeKind::Mul) ? "*" : "/";
            format_node(*n.rhs, prec, true, out);
            break;
        case NodeKind::Pow:
            format_node(*n.lhs, prec + 1, false, out);  // left operand binds tighter
            out.push_back('^');
            format_node(*n.rhs, prec, false, out);  // right-associative
            break;
        case NodeKind::Call:
            switch (n.fn) {
                case Fn::Sin: out += "sin("; break;
                case Fn::Cos: out += "cos("; break;
                case Fn::Exp: out += "exp("; break;
                case Fn::Sqrt: out += "sqrt("; break;
                case Fn::Abs: out += "abs("; break;
            }
            format_node(*n.lhs, 0, false, out);
            out.push_back(')');
            break;
    }
    if (parens) out.push_back(')');
}

bool nodes_identical(const ExprNode& a, const ExprNode& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case NodeKind::Number: return a.number == b.number;
        case NodeKind::VarX:
        case NodeKind::VarLambda: return true;
        case NodeKind::Negate: return nodes_identical(*a.lhs, *b.lhs);
        case NodeKind::Call: return a.fn == b.fn && nodes_identical(*a.lhs, *b.lhs);
        default: return nodes_identical(*a.lhs, *b.lhs) && nodes_identical(*a.rhs, *b.rhs);
    }
}

}  // namespace

double Expression::evaluate(double x, double lambda) const {
    if (!root_) throw std::logic_error("expression: evaluate on an empty expression");
    return eval_node(*root_, x, lambda);
}

std::string Expression::format() const {
    if (!root_) return {};
    std::string out;
    format_node(*root_, 0, false, out);
    return out;
}

bool Expression::identical_to(const Expression& other) const {
    if (!root_ || !other.root_) return root_ == other.root_;
    return nodes_identical(*root_, *other.root_);
}

Expression parse_expression(const std::string& source) {
    Parser p(source);
    Expression e;
    e.root_ = p.parse();
    e.source_ = source;
    return e;
}

}  // namespace spectral
