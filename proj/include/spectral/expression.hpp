// Copyright (c) the spectral-count contributors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <memory>
#include <stdexcept>
#include <string>

namespace spectral {

/// Parse failure with the byte offset of the offending token.
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t offset, std::string what)
        : std::runtime_error(std::move(what)), offset(offset) {}
    std::size_t offset;
};

/// Evaluation failure (division by zero, sqrt of a negative value, pow
/// domain error, non-finite result) with the byte offset of the operator.
class EvalError : public std::runtime_error {
public:
    EvalError(std::size_t offset, std::string what)
        : std::runtime_error(std::move(what)), offset(offset) {}
    std::size_t offset;
};

namespace detail {
struct ExprNode;
}

/// Compiled coefficient expression over the identifiers {x, lambda} with
/// operators + - * / ^, parentheses and the functions sin, cos, exp, sqrt,
/// abs. Immutable; evaluation is pure.
class Expression {
public:
    Expression() = default;

    double evaluate(double x, double lambda) const;
    /// Canonical rendering; parsing it again yields an identical tree.
    std::string format() const;
    bool is_valid() const { return static_cast<bool>(root_); }
    const std::string& source() const { return source_; }

    bool identical_to(const Expression& other) const;

private:
    friend Expression parse_expression(const std::string&);
    std::shared_ptr<const detail::ExprNode> root_;
    std::string source_;
};

/// Standard precedence: ^ (right-associative) over unary minus over * /
/// over + -. Unknown identifiers and malformed syntax raise ParseError with
/// a byte offset.
Expression parse_expression(const std::string& source);

}  // namespace spectral
