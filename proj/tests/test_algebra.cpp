#include "qplane/algebra.hpp"
#include "qplane/parser.hpp"
#include "support/generators.hpp"

#include <doctest.h>

#include <random>

using namespace qplane;
using qplane::testing::Rng;

namespace {

const LaurentQ q = LaurentQ::q_power(1);

AlgebraElement mono(int k, int l, int m, int n, const LaurentQ& c = LaurentQ(1L)) {
    return AlgebraElement::term(NormalMonomial{k, l, m, n}, c);
}

std::size_t leftmost(std::span<const std::size_t>) { return 0; }
std::size_t rightmost(std::span<const std::size_t> c) { return c.size() - 1; }

}  // namespace

TEST_CASE("single rewrite rules") {
    using enum Letter;
    CHECK(normalize(Word{z2, z1}) == mono(1, 0, 1, 0, q));
    CHECK(normalize(Word{z2, z1_star}) == mono(0, 1, 1, 0, q));
    CHECK(normalize(Word{z2_star, z1}) == mono(1, 0, 0, 1, q.inverse()));
    CHECK(normalize(Word{z2_star, z1_star}) == mono(0, 1, 0, 1, q.inverse()));
    CHECK(normalize(Word{z2_star, z2}) == mono(0, 0, 1, 1, q.pow(-2)));
    CHECK(normalize(Word{z1_star, z1}) ==
          mono(1, 1, 0, 0, q.pow(-2)) + mono(0, 0, 1, 1, q.pow(-4) - q.pow(-2)));
}

TEST_CASE("hand-derived normal forms") {
    using enum Letter;
    // z2* (z2 z1) = q z2* z1 z2 = z1 z2* z2 = q^-2 z1 z2 z2*
    CHECK(normalize(Word{z2_star, z2, z1}) == mono(1, 0, 1, 1, q.pow(-2)));
    CHECK(normalize(Word{}) == AlgebraElement::unit());
    CHECK(normalize(Word{z1, z1_star, z2, z2_star}) == mono(1, 1, 1, 1));
    CHECK(to_string(normalize(Word{z2, z1})) == "q * z1 z2");
    CHECK(to_string(normalize(Word{z1_star, z1})) == "q^-2 * z1 z1' + (q^-4 - q^-2) * z2 z2'");
    CHECK(to_string(AlgebraElement::unit()) == "1");
    CHECK(to_string(AlgebraElement()) == "0");
}

TEST_CASE("numeric printing") {
    using enum Letter;
    CHECK(to_string(evaluate(normalize(Word{z1_star, z1}), 0.5)) == "4 * z1 z1' + 12 * z2 z2'");
    CHECK_THROWS_AS(evaluate(normalize(Word{z1_star, z1}), 1.5), std::domain_error);
}

TEST_CASE("confluence under three strategies") {
    Rng rng(20240611);
    for (int trial = 0; trial < 300; ++trial) {
        const Word w = qplane::testing::random_word(rng, 8);
        Rng pick(static_cast<unsigned>(trial));
        auto random_choice = [&](std::span<const std::size_t> c) {
            return std::uniform_int_distribution<std::size_t>(0, c.size() - 1)(pick);
        };
        const AlgebraElement a = normalize_with(w, leftmost);
        CHECK(a == normalize(w));
        CHECK(a == normalize_with(w, rightmost));
        CHECK(a == normalize_with(w, random_choice));
    }
}

TEST_CASE("normal words are fixed points") {
    for (const auto& m : monomials_up_to(4)) {
        CHECK(redex_positions(m.word()).empty());
        CHECK(normalize(m.word()) == AlgebraElement::term(m, LaurentQ(1L)));
    }
}

TEST_CASE("degree and bidegree are preserved") {
    Rng rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        const Word w = qplane::testing::random_word(rng, 7);
        int dz1 = 0, dz2 = 0;
        for (Letter l : w) {
            dz1 += l == Letter::z1 ? 1 : l == Letter::z1_star ? -1 : 0;
            dz2 += l == Letter::z2 ? 1 : l == Letter::z2_star ? -1 : 0;
        }
        const AlgebraElement normal = normalize(w);
        for (const auto& [m, c] : normal.terms()) {
            CHECK(m.degree() == static_cast<int>(w.size()));
            CHECK(m.bidegree() == std::pair{dz1, dz2});
        }
    }
}

TEST_CASE("multiplication is associative and distributive") {
    Rng rng(11);
    for (int trial = 0; trial < 40; ++trial) {
        const auto a = qplane::testing::random_element(rng, 3, 3);
        const auto b = qplane::testing::random_element(rng, 3, 3);
        const auto c = qplane::testing::random_element(rng, 3, 2);
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * (b + c) == a * b + a * c);
        CHECK((a + b) * c == a * c + b * c);
    }
}

TEST_CASE("word normalization is a homomorphism") {
    Rng rng(13);
    for (int trial = 0; trial < 100; ++trial) {
        const Word u = qplane::testing::random_word(rng, 4);
        const Word v = qplane::testing::random_word(rng, 4);
        Word uv = u;
        uv.insert(uv.end(), v.begin(), v.end());
        CHECK(normalize(uv) == normalize(u) * normalize(v));
    }
}

TEST_CASE("adjoint is an involutive anti-homomorphism") {
    Rng rng(17);
    for (int trial = 0; trial < 40; ++trial) {
        const auto a = qplane::testing::random_element(rng, 3, 3);
        const auto b = qplane::testing::random_element(rng, 3, 3);
        CHECK(adjoint(a * b) == adjoint(b) * adjoint(a));
        CHECK(adjoint(adjoint(a)) == a);
        CHECK(adjoint(a + b) == adjoint(a) + adjoint(b));
    }
    CHECK(adjoint(AlgebraElement::generator(Letter::z1)) == AlgebraElement::generator(Letter::z1_star));
}

TEST_CASE("adjoint of the defining relations") {
    // (z2 z1 - q z1 z2)* = z1* z2* - q z2* z1*
    const auto r = parse_element("z2 z1 - q z1 z2");
    CHECK(r.is_zero());
    CHECK(parse_element("z1' z2' - q z2' z1'").is_zero());
    CHECK(parse_element("z1 z2' - q z2' z1").is_zero());
    CHECK(parse_element("z2 z2' - q^2 z2' z2").is_zero());
    CHECK(parse_element("z1 z1' - q^2 z1' z1 + (1 - q^2) z2' z2").is_zero());
}
