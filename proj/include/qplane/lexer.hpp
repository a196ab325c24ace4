#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace qplane {

/// Syntax error carrying the 0-based character offset of the offending token.
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t position, const std::string& message);
    std::size_t position() const { return position_; }
    const std::string& detail() const { return detail_; }

private:
    std::size_t position_;
    std::string detail_;
};

enum class TokenKind {
    number,
    identifier,
    plus,
    minus,
    star,
    slash,
    caret,
    prime,
    lparen,
    rparen,
    comma,
    less,
    less_equal,
    greater,
    greater_equal,
    end,
};

struct Token {
    TokenKind kind = TokenKind::end;
    std::string text;
    std::size_t position = 0;
};

/// Tokenizer shared by the algebra grammar and the coefficient-function DSL.
/// Identifiers are a run of letters optionally followed by digits, so "z1z2"
/// splits into "z1" "z2".
std::vector<Token> tokenize(std::string_view text);

/// Cursor over a token vector with the usual peek/accept/expect helpers.
class TokenStream {
public:
    explicit TokenStream(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

    const Token& peek() const { return tokens_[index_]; }
    bool at(TokenKind kind) const { return peek().kind == kind; }
    bool at_identifier(std::string_view name) const {
        return at(TokenKind::identifier) && peek().text == name;
    }
    const Token& next() { return tokens_[index_ < tokens_.size() - 1 ? index_++ : index_]; }
    bool accept(TokenKind kind);
    const Token& expect(TokenKind kind, const char* what);
    [[noreturn]] void fail(const std::string& message) const;

private:
    std::vector<Token> tokens_;
    std::size_t index_ = 0;
};

std::string describe(const Token& token);

}  // namespace qplane
