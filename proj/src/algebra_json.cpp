#include "qplane/algebra_json.hpp"

#include <stdexcept>

namespace qplane {

using nlohmann::json;

namespace {

json mono_json(const NormalMonomial& mono) { return json::array({mono.k, mono.l, mono.m, mono.n}); }

NormalMonomial mono_from_json(const json& j) {
    if (!j.is_array() || j.size() != 4) throw std::invalid_argument("\"mono\" must be [k,l,m,n]");
    NormalMonomial mono{j[0].get<int>(), j[1].get<int>(), j[2].get<int>(), j[3].get<int>()};
    if (mono.k < 0 || mono.l < 0 || mono.m < 0 || mono.n < 0)
        throw std::invalid_argument("monomial exponents must be non-negative");
    return mono;
}

mpz_class integer_from_json(const json& j) {
    if (j.is_string()) return mpz_class(j.get<std::string>(), 10);
    if (j.is_number_integer()) return mpz_class(std::to_string(j.get<long long>()), 10);
    throw std::invalid_argument("coefficient numerator/denominator must be a decimal string");
}

}  // namespace

json to_json(const AlgebraElement& element) {
    json terms = json::array();
    for (const auto& [mono, coeff] : element.terms()) {
        json c = json::array();
        for (const auto& [e, r] : coeff.terms())
            c.push_back(json::array({e, r.get_num().get_str(), r.get_den().get_str()}));
        terms.push_back({{"mono", mono_json(mono)}, {"coeff", c}});
    }
    return {{"terms", terms}};
}

AlgebraElement algebra_element_from_json(const json& doc) {
    try {
        AlgebraElement out;
        for (const auto& t : doc.at("terms")) {
            const NormalMonomial mono = mono_from_json(t.at("mono"));
            LaurentQ coeff;
            for (const auto& c : t.at("coeff")) {
                if (!c.is_array() || c.size() != 3)
                    throw std::invalid_argument("coefficient entries must be [exp,num,den]");
                const mpz_class den = integer_from_json(c[2]);
                if (den == 0) throw std::invalid_argument("zero denominator");
                Rational r(integer_from_json(c[1]), den);
                r.canonicalize();
                coeff += LaurentQ::monomial(r, c[0].get<int>());
            }
            out.add_term(mono, coeff);
        }
        return out;
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("malformed algebra element: ") + e.what());
    }
}

json to_json(const NumericElement& element) {
    json terms = json::array();
    for (const auto& [mono, value] : element) terms.push_back({{"mono", mono_json(mono)}, {"value", value}});
    return {{"terms", terms}};
}

}  // namespace qplane
