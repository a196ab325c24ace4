#include "qplane/laurent.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace qplane {

void require_unit_interval(double q0) {
    if (!(q0 > 0.0 && q0 < 1.0)) {
        std::ostringstream msg;
        msg << "deformation parameter must lie in (0,1), got " << q0;
        throw std::domain_error(msg.str());
    }
}

std::string rational_to_string(const Rational& value) { return value.get_str(); }

LaurentQ::LaurentQ(long value) {
    if (value != 0) terms_.emplace(0, Rational(value));
}

LaurentQ::LaurentQ(const Rational& value) {
    if (value != 0) terms_.emplace(0, value);
}

LaurentQ LaurentQ::monomial(const Rational& coeff, int exponent) {
    LaurentQ out;
    out.add_term(exponent, coeff);
    return out;
}

bool LaurentQ::is_one() const {
    return terms_.size() == 1 && terms_.begin()->first == 0 && terms_.begin()->second == 1;
}

Rational LaurentQ::coefficient(int exponent) const {
    auto it = terms_.find(exponent);
    return it == terms_.end() ? Rational(0) : it->second;
}

int LaurentQ::min_exponent() const {
    if (terms_.empty()) throw std::logic_error("min_exponent of zero Laurent polynomial");
    return terms_.begin()->first;
}

int LaurentQ::max_exponent() const {
    if (terms_.empty()) throw std::logic_error("max_exponent of zero Laurent polynomial");
    return terms_.rbegin()->first;
}

void LaurentQ::add_term(int exponent, const Rational& coeff) {
    if (coeff == 0) return;
    auto [it, inserted] = terms_.try_emplace(exponent, coeff);
    if (!inserted) {
        it->second += coeff;
        if (it->second == 0) terms_.erase(it);
    }
}

LaurentQ& LaurentQ::operator+=(const LaurentQ& rhs) {
    for (const auto& [e, c] : rhs.terms_) add_term(e, c);
    return *this;
}

LaurentQ& LaurentQ::operator-=(const LaurentQ& rhs) {
    for (const auto& [e, c] : rhs.terms_) add_term(e, -c);
    return *this;
}

LaurentQ operator*(const LaurentQ& lhs, const LaurentQ& rhs) {
    LaurentQ out;
    for (const auto& [e1, c1] : lhs.terms_)
        for (const auto& [e2, c2] : rhs.terms_) out.add_term(e1 + e2, c1 * c2);
    return out;
}

LaurentQ& LaurentQ::operator*=(const LaurentQ& rhs) { return *this = *this * rhs; }

LaurentQ LaurentQ::operator-() const {
    LaurentQ out = *this;
    for (auto& [e, c] : out.terms_) c = -c;
    return out;
}

LaurentQ LaurentQ::inverse() const {
    if (!is_monomial())
        throw std::domain_error("only monomials c*q^e are invertible in the Laurent ring");
    const auto& [e, c] = *terms_.begin();
    return monomial(Rational(1) / c, -e);
}

LaurentQ LaurentQ::pow(int exponent) const {
    if (exponent < 0) return inverse().pow(-exponent);
    LaurentQ result(1L);
    LaurentQ base = *this;
    while (exponent > 0) {
        if (exponent & 1) result *= base;
        exponent >>= 1;
        if (exponent > 0) base *= base;
    }
    return result;
}

double LaurentQ::evaluate(double q0) const {
    require_unit_interval(q0);
    double sum = 0.0;
    for (const auto& [e, c] : terms_) sum += c.get_d() * std::pow(q0, e);
    return sum;
}

namespace {

// "q", "q^-2", or "" for exponent zero.
std::string q_factor(int exponent) {
    if (exponent == 0) return "";
    if (exponent == 1) return "q";
    return "q^" + std::to_string(exponent);
}

std::string unsigned_term(const Rational& magnitude, int exponent) {
    const std::string qf = q_factor(exponent);
    if (qf.empty()) return rational_to_string(magnitude);
    if (magnitude == 1) return qf;
    return rational_to_string(magnitude) + " " + qf;
}

}  // namespace

std::string LaurentQ::to_string() const {
    if (terms_.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [e, c] : terms_) {
        const bool negative = c < 0;
        const Rational magnitude = negative ? Rational(-c) : c;
        if (first)
            out += negative ? "-" : "";
        else
            out += negative ? " - " : " + ";
        out += unsigned_term(magnitude, e);
        first = false;
    }
    return out;
}

}  // namespace qplane
