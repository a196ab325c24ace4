#include "qplane/fun_expr.hpp"

#include "qplane/lexer.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qplane {

namespace {

class ExpressionCompiler {
public:
    explicit ExpressionCompiler(std::string_view text) : tokens_(tokenize(text)) {}

    RealFunction compile() {
        if (tokens_.at(TokenKind::end)) tokens_.fail("empty expression");
        RealFunction out = sum();
        if (!tokens_.at(TokenKind::end)) tokens_.fail("unexpected " + describe(tokens_.peek()) + " after expression");
        return out;
    }

private:
    RealFunction sum() {
        RealFunction acc = product();
        for (;;) {
            if (tokens_.accept(TokenKind::plus)) {
                acc = [a = acc, b = product()](double x, double y) { return a(x, y) + b(x, y); };
            } else if (tokens_.accept(TokenKind::minus)) {
                acc = [a = acc, b = product()](double x, double y) { return a(x, y) - b(x, y); };
            } else {
                return acc;
            }
        }
    }

    RealFunction product() {
        RealFunction acc = unary();
        for (;;) {
            if (tokens_.accept(TokenKind::star)) {
                acc = [a = acc, b = unary()](double x, double y) { return a(x, y) * b(x, y); };
            } else if (tokens_.accept(TokenKind::slash)) {
                acc = [a = acc, b = unary()](double x, double y) { return a(x, y) / b(x, y); };
            } else {
                return acc;
            }
        }
    }

    RealFunction unary() {
        if (tokens_.accept(TokenKind::minus)) return [a = unary()](double x, double y) { return -a(x, y); };
        if (tokens_.accept(TokenKind::plus)) return unary();
        return power();
    }

    RealFunction power() {
        RealFunction base = primary();
        if (!tokens_.accept(TokenKind::caret)) return base;
        return [a = base, b = unary()](double x, double y) { return std::pow(a(x, y), b(x, y)); };
    }

    RealFunction parenthesised() {
        tokens_.expect(TokenKind::lparen, "'('");
        RealFunction inner = sum();
        tokens_.expect(TokenKind::rparen, "')'");
        return inner;
    }

    RealFunction primary() {
        const Token& tok = tokens_.peek();
        if (tok.kind == TokenKind::number) {
            const double value = std::stod(tokens_.next().text);
            return [value](double, double) { return value; };
        }
        if (tok.kind == TokenKind::lparen) return parenthesised();
        if (tok.kind != TokenKind::identifier) tokens_.fail("expected a number, variable or function, found " + describe(tok));
        const std::string name = tokens_.next().text;
        if (name == "x") return [](double x, double) { return x; };
        if (name == "y") return [](double, double y) { return y; };
        if (name == "exp") return [a = parenthesised()](double x, double y) { return std::exp(a(x, y)); };
        if (name == "sqrt") return [a = parenthesised()](double x, double y) { return std::sqrt(a(x, y)); };
        if (name == "abs") return [a = parenthesised()](double x, double y) { return std::abs(a(x, y)); };
        if (name == "max" || name == "min") {
            tokens_.expect(TokenKind::lparen, "'('");
            RealFunction a = sum();
            tokens_.expect(TokenKind::comma, "','");
            RealFunction b = sum();
            tokens_.expect(TokenKind::rparen, "')'");
            if (name == "max") return [a, b](double x, double y) { return std::max(a(x, y), b(x, y)); };
            return [a, b](double x, double y) { return std::min(a(x, y), b(x, y)); };
        }
        if (name == "indicator") return indicator();
        tokens_.fail("unknown identifier '" + name + "'");
    }

    RealFunction indicator() {
        tokens_.expect(TokenKind::lparen, "'('");
        RealFunction a = sum();
        const TokenKind cmp = tokens_.peek().kind;
        if (cmp != TokenKind::less && cmp != TokenKind::less_equal && cmp != TokenKind::greater &&
            cmp != TokenKind::greater_equal)
            tokens_.fail("expected a comparison, found " + describe(tokens_.peek()));
        tokens_.next();
        RealFunction b = sum();
        tokens_.expect(TokenKind::rparen, "')'");
        return [a, b, cmp](double x, double y) {
            const double l = a(x, y), r = b(x, y);
            switch (cmp) {
                case TokenKind::less: return l < r ? 1.0 : 0.0;
                case TokenKind::less_equal: return l <= r ? 1.0 : 0.0;
                case TokenKind::greater: return l > r ? 1.0 : 0.0;
                default: return l >= r ? 1.0 : 0.0;
            }
        };
    }

    TokenStream tokens_;
};

}  // namespace

RealFunction compile_expression(std::string_view text) { return ExpressionCompiler(text).compile(); }

}  // namespace qplane
