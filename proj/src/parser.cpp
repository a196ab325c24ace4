#include "qplane/parser.hpp"

#include <algorithm>
#include <cctype>

namespace qplane {

Rational parse_decimal(std::string_view literal) {
    std::string mantissa(literal);
    long exponent10 = 0;
    if (auto e = mantissa.find_first_of("eE"); e != std::string::npos) {
        exponent10 = std::stol(mantissa.substr(e + 1));
        mantissa.resize(e);
    }
    if (auto dot = mantissa.find('.'); dot != std::string::npos) {
        exponent10 -= static_cast<long>(mantissa.size() - dot - 1);
        mantissa.erase(dot, 1);
    }
    if (mantissa.empty()) mantissa = "0";
    Rational value(mpz_class(mantissa, 10));
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(exponent10)));
    if (exponent10 >= 0)
        value *= scale;
    else
        value /= scale;
    value.canonicalize();
    return value;
}

namespace {

void add_into(WordCombination& acc, const Word& word, const LaurentQ& coeff) {
    if (coeff.is_zero()) return;
    auto [it, inserted] = acc.try_emplace(word, coeff);
    if (!inserted) {
        it->second += coeff;
        if (it->second.is_zero()) acc.erase(it);
    }
}

WordCombination scalar(const LaurentQ& value) {
    WordCombination out;
    add_into(out, Word{}, value);
    return out;
}

WordCombination product(const WordCombination& a, const WordCombination& b) {
    WordCombination out;
    for (const auto& [wa, ca] : a)
        for (const auto& [wb, cb] : b) {
            Word joined = wa;
            joined.insert(joined.end(), wb.begin(), wb.end());
            add_into(out, joined, ca * cb);
        }
    return out;
}

bool is_scalar(const WordCombination& value) {
    return std::all_of(value.begin(), value.end(), [](const auto& kv) { return kv.first.empty(); });
}

struct Factor {
    WordCombination value;
    bool bare_letter = false;
};

class AlgebraParser {
public:
    explicit AlgebraParser(std::string_view text) : tokens_(tokenize(text)) {}

    WordCombination parse_all() {
        if (tokens_.at(TokenKind::end)) return scalar(LaurentQ(1L));
        WordCombination out = element();
        if (!tokens_.at(TokenKind::end))
            tokens_.fail("unexpected " + describe(tokens_.peek()) + " after expression");
        return out;
    }

private:
    WordCombination element() {
        WordCombination acc;
        bool negate = false;
        if (tokens_.accept(TokenKind::minus))
            negate = true;
        else
            tokens_.accept(TokenKind::plus);
        while (true) {
            const WordCombination t = term();
            for (const auto& [w, c] : t) add_into(acc, w, negate ? -c : c);
            if (tokens_.accept(TokenKind::plus))
                negate = false;
            else if (tokens_.accept(TokenKind::minus))
                negate = true;
            else
                break;
        }
        return acc;
    }

    bool starts_factor() const {
        return tokens_.at(TokenKind::number) || tokens_.at(TokenKind::identifier) ||
               tokens_.at(TokenKind::lparen);
    }

    WordCombination term() {
        if (!starts_factor()) tokens_.fail("expected a factor, found " + describe(tokens_.peek()));
        WordCombination acc = factor();
        while (true) {
            if (tokens_.accept(TokenKind::star)) {
                if (!starts_factor())
                    tokens_.fail("expected a factor after '*', found " + describe(tokens_.peek()));
            } else if (!starts_factor()) {
                break;
            }
            acc = product(acc, factor());
        }
        return acc;
    }

    WordCombination factor() {
        Factor f = primary();
        while (true) {
            if (tokens_.accept(TokenKind::prime)) {
                WordCombination starred;
                for (const auto& [w, c] : f.value) add_into(starred, star(w), c);
                f.value = std::move(starred);
            } else if (tokens_.at(TokenKind::caret)) {
                const std::size_t where = tokens_.peek().position;
                tokens_.next();
                const long exponent = signed_integer();
                f.value = power(f, exponent, where);
                f.bare_letter = false;
            } else {
                break;
            }
        }
        return f.value;
    }

    long signed_integer() {
        const bool paren = tokens_.accept(TokenKind::lparen);
        bool negative = false;
        if (tokens_.accept(TokenKind::minus))
            negative = true;
        else
            tokens_.accept(TokenKind::plus);
        const Token& tok = tokens_.peek();
        if (tok.kind != TokenKind::number ||
            !std::all_of(tok.text.begin(), tok.text.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
            tokens_.fail("expected an integer exponent, found " + describe(tok));
        const long value = std::stol(tok.text);
        tokens_.next();
        if (paren) tokens_.expect(TokenKind::rparen, "')'");
        return negative ? -value : value;
    }

    WordCombination power(const Factor& f, long exponent, std::size_t where) {
        if (exponent >= 0) {
            WordCombination out = scalar(LaurentQ(1L));
            for (long i = 0; i < exponent; ++i) out = product(out, f.value);
            return out;
        }
        if (f.bare_letter) throw ParseError(where, "negative power on a letter");
        if (!is_scalar(f.value) || f.value.size() != 1 || !f.value.begin()->second.is_monomial())
            throw ParseError(where, "negative power of a non-invertible expression");
        return scalar(f.value.begin()->second.pow(static_cast<int>(exponent)));
    }

    Factor primary() {
        const Token tok = tokens_.peek();
        if (tok.kind == TokenKind::number) {
            tokens_.next();
            Rational value = parse_decimal(tok.text);
            if (tokens_.accept(TokenKind::slash)) {
                const Token den = tokens_.expect(TokenKind::number, "a denominator");
                const Rational d = parse_decimal(den.text);
                if (d == 0) throw ParseError(den.position, "division by zero");
                value /= d;
            }
            return {scalar(LaurentQ(value)), false};
        }
        if (tok.kind == TokenKind::identifier) {
            tokens_.next();
            if (tok.text == "q") return {scalar(LaurentQ::q_power(1)), false};
            if (tok.text == "z1" || tok.text == "z2") {
                WordCombination out;
                add_into(out, Word{tok.text == "z1" ? Letter::z1 : Letter::z2}, LaurentQ(1L));
                return {out, true};
            }
            throw ParseError(tok.position, "unknown identifier '" + tok.text + "'");
        }
        if (tokens_.accept(TokenKind::lparen)) {
            WordCombination inner = element();
            tokens_.expect(TokenKind::rparen, "')'");
            return {inner, false};
        }
        tokens_.fail("expected a factor, found " + describe(tok));
    }

    TokenStream tokens_;
};

}  // namespace

WordCombination parse_words(std::string_view text) { return AlgebraParser(text).parse_all(); }

Word parse_word(std::string_view text) {
    const WordCombination combination = parse_words(text);
    if (combination.size() != 1 || !combination.begin()->second.is_one())
        throw ParseError(0, "expected a single word with coefficient 1");
    return combination.begin()->first;
}

AlgebraElement parse_element(std::string_view text) { return normalize(parse_words(text)); }

}  // namespace qplane
