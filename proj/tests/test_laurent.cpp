#include "qplane/laurent.hpp"

#include <doctest.h>

#include <cmath>
#include <stdexcept>

using qplane::LaurentQ;
using qplane::Rational;

TEST_CASE("laurent arithmetic") {
    const LaurentQ q = LaurentQ::q_power(1);
    const LaurentQ one(1L);
    CHECK((one - q * q).to_string() == "1 - q^2");
    CHECK((LaurentQ::q_power(-4) - LaurentQ::q_power(-2)).to_string() == "q^-4 - q^-2");
    CHECK(LaurentQ::monomial(Rational(3, 4), 1).to_string() == "3/4 q");
    CHECK(LaurentQ().to_string() == "0");
    CHECK((q - q).is_zero());
    CHECK((q * q.inverse()).is_one());
    CHECK(q.pow(-3) == LaurentQ::q_power(-3));
    CHECK(((one + q) * (one - q)) == one - q * q);
    CHECK(LaurentQ::monomial(Rational(0), 5).is_zero());
}

TEST_CASE("laurent inverse needs a monomial") {
    CHECK_THROWS_AS((LaurentQ(1L) + LaurentQ::q_power(1)).inverse(), std::domain_error);
    CHECK_THROWS_AS(LaurentQ().inverse(), std::domain_error);
}

TEST_CASE("laurent evaluation") {
    const LaurentQ c = LaurentQ::q_power(-4) - LaurentQ::q_power(-2);
    CHECK(c.evaluate(0.5) == 12.0);
    CHECK(LaurentQ::q_power(-2).evaluate(0.5) == 4.0);
    CHECK(LaurentQ::monomial(Rational(3, 4), 1).evaluate(0.5) == doctest::Approx(0.375));
    CHECK_THROWS_AS(c.evaluate(1.0), std::domain_error);
    CHECK_THROWS_AS(c.evaluate(0.0), std::domain_error);
    CHECK_THROWS_AS(c.evaluate(-0.5), std::domain_error);
}
