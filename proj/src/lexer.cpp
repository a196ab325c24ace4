#include "qplane/lexer.hpp"

#include <cctype>

namespace qplane {

ParseError::ParseError(std::size_t position, const std::string& message)
    : std::runtime_error("parse error at position " + std::to_string(position) + ": " + message),
      position_(position),
      detail_(message) {}

namespace {

bool is_alpha(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

}  // namespace

std::vector<Token> tokenize(std::string_view text) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < text.size()) {
        const char c = text[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        const std::size_t start = i;
        auto single = [&](TokenKind kind) {
            out.push_back({kind, std::string(1, c), start});
            ++i;
        };
        if (is_digit(c) || (c == '.' && i + 1 < text.size() && is_digit(text[i + 1]))) {
            while (i < text.size() && is_digit(text[i])) ++i;
            if (i < text.size() && text[i] == '.') {
                ++i;
                while (i < text.size() && is_digit(text[i])) ++i;
            }
            if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
                std::size_t j = i + 1;
                if (j < text.size() && (text[j] == '+' || text[j] == '-')) ++j;
                if (j < text.size() && is_digit(text[j])) {
                    i = j;
                    while (i < text.size() && is_digit(text[i])) ++i;
                }
            }
            out.push_back({TokenKind::number, std::string(text.substr(start, i - start)), start});
            continue;
        }
        if (is_alpha(c)) {
            while (i < text.size() && is_alpha(text[i])) ++i;
            while (i < text.size() && is_digit(text[i])) ++i;
            out.push_back({TokenKind::identifier, std::string(text.substr(start, i - start)), start});
            continue;
        }
        switch (c) {
            case '+': single(TokenKind::plus); break;
            case '-': single(TokenKind::minus); break;
            case '*': single(TokenKind::star); break;
            case '/': single(TokenKind::slash); break;
            case '^': single(TokenKind::caret); break;
            case '\'': single(TokenKind::prime); break;
            case '(': single(TokenKind::lparen); break;
            case ')': single(TokenKind::rparen); break;
            case ',': single(TokenKind::comma); break;
            case '<':
            case '>': {
                const bool eq = i + 1 < text.size() && text[i + 1] == '=';
                const TokenKind kind = c == '<' ? (eq ? TokenKind::less_equal : TokenKind::less)
                                                : (eq ? TokenKind::greater_equal : TokenKind::greater);
                out.push_back({kind, std::string(text.substr(start, eq ? 2 : 1)), start});
                i += eq ? 2 : 1;
                break;
            }
            default: throw ParseError(start, std::string("unexpected character '") + c + "'");
        }
    }
    out.push_back({TokenKind::end, "", text.size()});
    return out;
}

std::string describe(const Token& token) {
    if (token.kind == TokenKind::end) return "end of input";
    return "'" + token.text + "'";
}

bool TokenStream::accept(TokenKind kind) {
    if (!at(kind)) return false;
    next();
    return true;
}

const Token& TokenStream::expect(TokenKind kind, const char* what) {
    if (!at(kind)) fail(std::string("expected ") + what + ", found " + describe(peek()));
    return next();
}

void TokenStream::fail(const std::string& message) const { throw ParseError(peek().position, message); }

}  // namespace qplane
