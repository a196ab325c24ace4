#include "qplane/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <tuple>

namespace qplane {

Letter star(Letter letter) {
    switch (letter) {
        case Letter::z1: return Letter::z1_star;
        case Letter::z1_star: return Letter::z1;
        case Letter::z2: return Letter::z2_star;
        case Letter::z2_star: return Letter::z2;
    }
    throw std::logic_error("invalid letter");
}

std::string to_string(Letter letter) {
    switch (letter) {
        case Letter::z1: return "z1";
        case Letter::z1_star: return "z1'";
        case Letter::z2: return "z2";
        case Letter::z2_star: return "z2'";
    }
    throw std::logic_error("invalid letter");
}

Word star(const Word& word) {
    Word out(word.rbegin(), word.rend());
    for (auto& letter : out) letter = star(letter);
    return out;
}

std::string to_string(const Word& word) {
    if (word.empty()) return "1";
    std::string out;
    for (std::size_t i = 0; i < word.size(); ++i) {
        if (i > 0) out += ' ';
        out += to_string(word[i]);
    }
    return out;
}

Word NormalMonomial::word() const {
    Word out;
    out.reserve(static_cast<std::size_t>(degree()));
    out.insert(out.end(), static_cast<std::size_t>(k), Letter::z1);
    out.insert(out.end(), static_cast<std::size_t>(l), Letter::z1_star);
    out.insert(out.end(), static_cast<std::size_t>(m), Letter::z2);
    out.insert(out.end(), static_cast<std::size_t>(n), Letter::z2_star);
    return out;
}

bool MonomialOrder::operator()(const NormalMonomial& a, const NormalMonomial& b) const {
    if (a.degree() != b.degree()) return a.degree() < b.degree();
    return std::tie(b.k, b.l, b.m, b.n) < std::tie(a.k, a.l, a.m, a.n);
}

std::string to_string(const NormalMonomial& mono) {
    if (mono.is_unit()) return "1";
    std::string out;
    auto append = [&out](const char* name, int power) {
        if (power == 0) return;
        if (!out.empty()) out += ' ';
        out += name;
        if (power > 1) out += "^" + std::to_string(power);
    };
    append("z1", mono.k);
    append("z1'", mono.l);
    append("z2", mono.m);
    append("z2'", mono.n);
    return out;
}

std::vector<NormalMonomial> monomials_up_to(int max_degree) {
    std::vector<NormalMonomial> out;
    for (int k = 0; k <= max_degree; ++k)
        for (int l = 0; k + l <= max_degree; ++l)
            for (int m = 0; k + l + m <= max_degree; ++m)
                for (int n = 0; k + l + m + n <= max_degree; ++n) out.push_back({k, l, m, n});
    std::sort(out.begin(), out.end(), MonomialOrder{});
    return out;
}

AlgebraElement AlgebraElement::generator(Letter letter) {
    NormalMonomial mono;
    switch (letter) {
        case Letter::z1: mono.k = 1; break;
        case Letter::z1_star: mono.l = 1; break;
        case Letter::z2: mono.m = 1; break;
        case Letter::z2_star: mono.n = 1; break;
    }
    return term(mono, LaurentQ(1L));
}

AlgebraElement AlgebraElement::term(const NormalMonomial& mono, const LaurentQ& coeff) {
    AlgebraElement out;
    out.add_term(mono, coeff);
    return out;
}

LaurentQ AlgebraElement::coefficient(const NormalMonomial& mono) const {
    auto it = terms_.find(mono);
    return it == terms_.end() ? LaurentQ() : it->second;
}

void AlgebraElement::add_term(const NormalMonomial& mono, const LaurentQ& coeff) {
    if (coeff.is_zero()) return;
    auto [it, inserted] = terms_.try_emplace(mono, coeff);
    if (!inserted) {
        it->second += coeff;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

AlgebraElement& AlgebraElement::operator+=(const AlgebraElement& rhs) {
    for (const auto& [mono, c] : rhs.terms_) add_term(mono, c);
    return *this;
}

AlgebraElement& AlgebraElement::operator-=(const AlgebraElement& rhs) {
    for (const auto& [mono, c] : rhs.terms_) add_term(mono, -c);
    return *this;
}

AlgebraElement operator*(const LaurentQ& s, const AlgebraElement& a) {
    AlgebraElement out;
    if (s.is_zero()) return out;
    for (const auto& [mono, c] : a.terms_) out.add_term(mono, s * c);
    return out;
}

// ---------------------------------------------------------------------------
// Rewriting

std::vector<std::size_t> redex_positions(const Word& word) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i + 1 < word.size(); ++i)
        if (word[i] > word[i + 1]) out.push_back(i);
    return out;
}

namespace {

// q^-4 (1 - q^2)
const LaurentQ& cross_coefficient() {
    static const LaurentQ value = LaurentQ::q_power(-4) - LaurentQ::q_power(-2);
    return value;
}

Word splice(const Word& word, std::size_t pos, Letter first, Letter second) {
    Word out = word;
    out[pos] = first;
    out[pos + 1] = second;
    return out;
}

NormalMonomial monomial_of_normal_word(const Word& word) {
    NormalMonomial mono;
    for (Letter letter : word) {
        switch (letter) {
            case Letter::z1: ++mono.k; break;
            case Letter::z1_star: ++mono.l; break;
            case Letter::z2: ++mono.m; break;
            case Letter::z2_star: ++mono.n; break;
        }
    }
    return mono;
}

}  // namespace

Rewrite rewrite_at(const Word& word, std::size_t pos) {
    if (pos + 1 >= word.size()) throw std::out_of_range("rewrite position outside word");
    const Letter a = word[pos];
    const Letter b = word[pos + 1];
    using enum Letter;
    if (a == z2 && b == z1) return {{LaurentQ::q_power(1), splice(word, pos, z1, z2)}};
    if (a == z2 && b == z1_star) return {{LaurentQ::q_power(1), splice(word, pos, z1_star, z2)}};
    if (a == z2_star && b == z1) return {{LaurentQ::q_power(-1), splice(word, pos, z1, z2_star)}};
    if (a == z2_star && b == z1_star)
        return {{LaurentQ::q_power(-1), splice(word, pos, z1_star, z2_star)}};
    if (a == z2_star && b == z2) return {{LaurentQ::q_power(-2), splice(word, pos, z2, z2_star)}};
    if (a == z1_star && b == z1)
        return {{LaurentQ::q_power(-2), splice(word, pos, z1, z1_star)},
                {cross_coefficient(), splice(word, pos, z2, z2_star)}};
    throw std::invalid_argument("no rewrite rule applies at position " + std::to_string(pos));
}

AlgebraElement normalize_with(const Word& word, const RedexChooser& choose) {
    // Pending words are merged as they reappear, which keeps the frontier small.
    std::map<Word, LaurentQ> pending;
    pending.emplace(word, LaurentQ(1L));
    AlgebraElement result;
    while (!pending.empty()) {
        auto node = pending.extract(pending.begin());
        const Word& current = node.key();
        const LaurentQ& coeff = node.mapped();
        const auto redexes = redex_positions(current);
        if (redexes.empty()) {
            result.add_term(monomial_of_normal_word(current), coeff);
            continue;
        }
        const std::size_t pick = choose(redexes);
        if (pick >= redexes.size()) throw std::out_of_range("redex chooser returned bad index");
        for (auto& [c, w] : rewrite_at(current, redexes[pick])) {
            auto [it, inserted] = pending.try_emplace(std::move(w), c * coeff);
            if (!inserted) {
                it->second += c * coeff;
                if (it->second.is_zero()) pending.erase(it);
            }
        }
    }
    return result;
}

AlgebraElement normalize(const Word& word) {
    return normalize_with(word, [](std::span<const std::size_t>) { return std::size_t{0}; });
}

AlgebraElement normalize(const WordCombination& combination) {
    AlgebraElement out;
    for (const auto& [word, coeff] : combination) out += coeff * normalize(word);
    return out;
}

AlgebraElement multiply(const AlgebraElement& a, const AlgebraElement& b) {
    AlgebraElement out;
    for (const auto& [ma, ca] : a.terms()) {
        const Word left = ma.word();
        for (const auto& [mb, cb] : b.terms()) {
            Word joined = left;
            const Word right = mb.word();
            joined.insert(joined.end(), right.begin(), right.end());
            out += (ca * cb) * normalize(joined);
        }
    }
    return out;
}

AlgebraElement adjoint(const AlgebraElement& a) {
    AlgebraElement out;
    for (const auto& [mono, c] : a.terms()) out += c * normalize(star(mono.word()));
    return out;
}

NumericElement evaluate(const AlgebraElement& a, double q0) {
    require_unit_interval(q0);
    NumericElement out;
    for (const auto& [mono, c] : a.terms()) out.emplace(mono, c.evaluate(q0));
    return out;
}

// ---------------------------------------------------------------------------
// Printing

std::string format_double(double value) {
    if (value == 0.0) return "0";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

namespace {

void append_signed(std::string& out, bool negative, const std::string& body) {
    if (out.empty())
        out += negative ? "-" + body : body;
    else
        out += (negative ? " - " : " + ") + body;
}

}  // namespace

std::string to_string(const AlgebraElement& a) {
    if (a.is_zero()) return "0";
    std::string out;
    const bool single = a.terms().size() == 1;
    for (const auto& [mono, c] : a.terms()) {
        bool negative = false;
        std::string scalar;
        if (c.is_monomial()) {
            negative = c.terms().begin()->second < 0;
            const LaurentQ magnitude = negative ? -c : c;
            scalar = magnitude.is_one() ? "" : magnitude.to_string();
        } else {
            scalar = (single && mono.is_unit()) ? c.to_string() : "(" + c.to_string() + ")";
        }
        std::string body;
        if (mono.is_unit())
            body = scalar.empty() ? "1" : scalar;
        else
            body = scalar.empty() ? to_string(mono) : scalar + " * " + to_string(mono);
        append_signed(out, negative, body);
    }
    return out;
}

std::string to_string(const NumericElement& a) {
    if (a.empty()) return "0";
    std::string out;
    for (const auto& [mono, c] : a) {
        const bool negative = std::signbit(c) && c != 0.0;
        const double magnitude = std::fabs(c);
        std::string body;
        if (mono.is_unit())
            body = format_double(magnitude);
        else if (magnitude == 1.0)
            body = to_string(mono);
        else
            body = format_double(magnitude) + " * " + to_string(mono);
        append_signed(out, negative, body);
    }
    return out;
}

}  // namespace qplane
