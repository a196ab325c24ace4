#pragma once

#include <gmpxx.h>

#include <compare>
#include <map>
#include <string>

namespace qplane {

using Rational = mpq_class;

/// Laurent polynomial in the formal deformation parameter q with exact
/// rational coefficients.  Zero coefficients are never stored, so two values
/// are equal iff their term maps are identical.
class LaurentQ {
public:
    using TermMap = std::map<int, Rational>;

    LaurentQ() = default;
    LaurentQ(long value);  // NOLINT: implicit integer constants are convenient
    explicit LaurentQ(const Rational& value);

    /// c * q^exponent
    static LaurentQ monomial(const Rational& coeff, int exponent);
    static LaurentQ q_power(int exponent) { return monomial(Rational(1), exponent); }

    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_one() const;
    /// True when the value is a single term c*q^e.
    bool is_monomial() const { return terms_.size() == 1; }
    Rational coefficient(int exponent) const;
    int min_exponent() const;
    int max_exponent() const;

    LaurentQ& operator+=(const LaurentQ& rhs);
    LaurentQ& operator-=(const LaurentQ& rhs);
    LaurentQ& operator*=(const LaurentQ& rhs);
    LaurentQ operator-() const;

    friend LaurentQ operator+(LaurentQ lhs, const LaurentQ& rhs) { return lhs += rhs; }
    friend LaurentQ operator-(LaurentQ lhs, const LaurentQ& rhs) { return lhs -= rhs; }
    friend LaurentQ operator*(const LaurentQ& lhs, const LaurentQ& rhs);
    friend bool operator==(const LaurentQ& lhs, const LaurentQ& rhs) = default;

    /// Multiplicative inverse; only monomials are invertible in the Laurent ring.
    LaurentQ inverse() const;
    LaurentQ pow(int exponent) const;

    /// Value at a numeric q.  Throws std::domain_error unless 0 < q0 < 1.
    double evaluate(double q0) const;

    /// Ascending exponents, e.g. "1 - q^2", "q^-4 - q^-2", "3/4 q".
    std::string to_string() const;

private:
    void add_term(int exponent, const Rational& coeff);

    TermMap terms_;
};

/// Throws std::domain_error unless 0 < q0 < 1.
void require_unit_interval(double q0);

std::string rational_to_string(const Rational& value);

}  // namespace qplane
