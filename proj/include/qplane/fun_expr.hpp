#pragma once

#include <functional>
#include <string_view>

namespace qplane {

// Coefficient-function DSL over the variables x and y:
//
//   expr    := sum
//   sum     := product (('+'|'-') product)*
//   product := unary (('*'|'/') unary)*
//   unary   := ('-'|'+') unary | power
//   power   := primary ['^' unary]                 right associative
//   primary := number | 'x' | 'y' | '(' expr ')'
//            | ('exp'|'sqrt'|'abs') '(' expr ')'
//            | ('max'|'min') '(' expr ',' expr ')'
//            | 'indicator' '(' expr cmp expr ')'   cmp in < <= > >=
//
// Throws ParseError with the offending position.

using RealFunction = std::function<double(double x, double y)>;

RealFunction compile_expression(std::string_view text);

}  // namespace qplane
