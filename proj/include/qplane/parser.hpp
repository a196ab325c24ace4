#pragma once

#include "qplane/algebra.hpp"
#include "qplane/lexer.hpp"

#include <string_view>

namespace qplane {

// Grammar (whitespace-insensitive):
//
//   element := ['+'|'-'] term (('+'|'-') term)*
//   term    := factor (['*'] factor)*            juxtaposition multiplies
//   factor  := primary ('\'' | '^' int)*         prime binds tighter than '^'
//   primary := number ['/' number] | 'q' | 'z1' | 'z2' | '(' element ')'
//
// Letters and parenthesised groups containing letters take non-negative
// powers only; 'q' (and any invertible scalar c*q^e) takes any integer power.
// An empty or blank input denotes the unit.

/// Flattened, unnormalized linear combination of words.
WordCombination parse_words(std::string_view text);

/// A single word with coefficient 1, e.g. "z2 z1" -> [z2, z1].
Word parse_word(std::string_view text);

/// parse_words followed by normalize.
AlgebraElement parse_element(std::string_view text);

/// Exact value of a decimal literal such as "12", "0.75" or "1e-3".
Rational parse_decimal(std::string_view literal);

}  // namespace qplane
