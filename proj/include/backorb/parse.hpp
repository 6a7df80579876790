#pragma once

#include <string>

#include "backorb/ratmap.hpp"

namespace backorb {

/// Syntax error with the offset of the offending character in the input.
class ParseError : public std::invalid_argument {
public:
    ParseError(const std::string& message, size_t offset)
        : std::invalid_argument(message + " at offset " + std::to_string(offset)),
          offset_(offset) {}
    size_t offset() const { return offset_; }

private:
    size_t offset_;
};

/// Grammar:
///   map    := expr ('/' expr)?
///   expr   := '-'? term (('+'|'-') term)*
///   term   := factor ('*' factor)*
///   factor := base ('^' uint)?
///   base   := 'z' | number | 'i' | '(' expr ')'
/// Numbers are unsigned decimals with an optional exponent. The optional
/// leading '-' on expr is a convenience on top of the core grammar.
Polynomial parse_polynomial_expr(const std::string& text);

/// Parses "expr" or "expr / expr" into a validated RationalMap.
RationalMap parse_map(const std::string& text, Tolerances tols = {});

/// Canonical textual form that reparses to bit-identical coefficients.
std::string print_polynomial(const Polynomial& p);
std::string print_map(const RationalMap& map);

}  // namespace backorb
