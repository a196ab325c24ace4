#pragma once

#include "qplane/algebra.hpp"

#include <json.hpp>

namespace qplane {

// {"terms":[{"mono":[k,l,m,n],"coeff":[[exp,"num","den"],...]},...]}
// Numerators and denominators are arbitrary-precision decimal strings.

nlohmann::json to_json(const AlgebraElement& element);
/// Throws std::invalid_argument on schema violations.
AlgebraElement algebra_element_from_json(const nlohmann::json& doc);

nlohmann::json to_json(const NumericElement& element);

}  // namespace qplane
