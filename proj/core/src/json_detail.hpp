#pragma once

// Internal JSON conversion helpers shared between translation units.
// nlohmann/json stays out of the public headers.

#include <json.hpp>

#include "ddspce/pca.hpp"
#include "ddspce/univariate_basis.hpp"

namespace ddspce {

nlohmann::json pca_to_json(const PcaTransform& t);
PcaTransform from_pca_json(const nlohmann::json& j);

nlohmann::json basis_to_json(const UnivariateBasis& b);
UnivariateBasis basis_from_json(const nlohmann::json& j);

}  // namespace ddspce
