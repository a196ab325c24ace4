#pragma once

#include "qplane/laurent.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace qplane {

/// Generators of the coordinate *-algebra, listed in normal-form order.
enum class Letter : std::uint8_t { z1 = 0, z1_star = 1, z2 = 2, z2_star = 3 };

inline constexpr std::array<Letter, 4> kAllLetters = {Letter::z1, Letter::z1_star, Letter::z2,
                                                      Letter::z2_star};

Letter star(Letter letter);
std::string to_string(Letter letter);

using Word = std::vector<Letter>;

/// Reverse and star every letter.
Word star(const Word& word);
std::string to_string(const Word& word);

/// z1^k z1*^l z2^m z2*^n.
struct NormalMonomial {
    int k = 0;
    int l = 0;
    int m = 0;
    int n = 0;

    int degree() const { return k + l + m + n; }
    bool is_unit() const { return degree() == 0; }
    Word word() const;
    /// Shift bidegree (k-l, m-n).
    std::pair<int, int> bidegree() const { return {k - l, m - n}; }

    friend bool operator==(const NormalMonomial&, const NormalMonomial&) = default;
};

/// Graded order: total degree ascending, then exponents (k,l,m,n) descending.
struct MonomialOrder {
    bool operator()(const NormalMonomial& a, const NormalMonomial& b) const;
};

std::string to_string(const NormalMonomial& mono);

/// All normal monomials with total degree <= max_degree, in MonomialOrder.
std::vector<NormalMonomial> monomials_up_to(int max_degree);

class AlgebraElement {
public:
    using TermMap = std::map<NormalMonomial, LaurentQ, MonomialOrder>;

    AlgebraElement() = default;

    static AlgebraElement unit() { return term(NormalMonomial{}, LaurentQ(1L)); }
    static AlgebraElement generator(Letter letter);
    static AlgebraElement term(const NormalMonomial& mono, const LaurentQ& coeff);

    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    LaurentQ coefficient(const NormalMonomial& mono) const;

    void add_term(const NormalMonomial& mono, const LaurentQ& coeff);

    AlgebraElement& operator+=(const AlgebraElement& rhs);
    AlgebraElement& operator-=(const AlgebraElement& rhs);
    friend AlgebraElement operator+(AlgebraElement a, const AlgebraElement& b) { return a += b; }
    friend AlgebraElement operator-(AlgebraElement a, const AlgebraElement& b) { return a -= b; }
    friend AlgebraElement operator*(const LaurentQ& s, const AlgebraElement& a);
    friend bool operator==(const AlgebraElement&, const AlgebraElement&) = default;

private:
    TermMap terms_;
};

/// Unnormalized linear combination of words, as produced by the parser.
using WordCombination = std::map<Word, LaurentQ>;

/// One rewrite rule application: replacement words with their coefficients.
using Rewrite = std::vector<std::pair<LaurentQ, Word>>;

/// Positions i such that (word[i], word[i+1]) is out of normal order.
std::vector<std::size_t> redex_positions(const Word& word);

/// Apply the rewrite rule at the adjacent pair starting at `pos`.
Rewrite rewrite_at(const Word& word, std::size_t pos);

/// Picks one of the (non-empty) candidate redex positions; returns an index
/// into `candidates`.
using RedexChooser = std::function<std::size_t(std::span<const std::size_t> candidates)>;

/// Leftmost reduction, the canonical strategy.
AlgebraElement normalize(const Word& word);
AlgebraElement normalize(const WordCombination& combination);
/// Exhaustive rewriting with a caller-chosen redex at every step.
AlgebraElement normalize_with(const Word& word, const RedexChooser& choose);

AlgebraElement multiply(const AlgebraElement& a, const AlgebraElement& b);
inline AlgebraElement operator*(const AlgebraElement& a, const AlgebraElement& b) {
    return multiply(a, b);
}

/// Anti-linear anti-homomorphism; coefficients are real so only the words
/// are reversed and starred.
AlgebraElement adjoint(const AlgebraElement& a);

using NumericElement = std::map<NormalMonomial, double, MonomialOrder>;

/// Evaluate every coefficient at q0; throws std::domain_error unless 0 < q0 < 1.
NumericElement evaluate(const AlgebraElement& a, double q0);

/// Symbolic normal form, e.g. "q * z1 z2" or "(q^-4 - q^-2) * z2 z2'".
std::string to_string(const AlgebraElement& a);
/// Numeric normal form with 17 significant digits, e.g. "4 * z1 z1' + 12 * z2 z2'".
std::string to_string(const NumericElement& a);

std::string format_double(double value);

}  // namespace qplane
