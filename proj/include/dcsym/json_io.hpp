#pragma once

// JSON wire formats: equations, transforms, and the catalog dump/load.

#include <json.hpp>

#include "dcsym/catalog.hpp"
#include "dcsym/equiv.hpp"

namespace dcsym {

using Json = nlohmann::ordered_json;

Json equation_to_json(const DcEquation& eq);
DcEquation equation_from_json(const Json& j);

Json transform_to_json(const PointEquivTransform& T);
Json transform_to_json(const ConservedEquivTransform& T);
Json transform_to_json(const PotentialEquivTransform& T);

PointEquivTransform point_transform_from_json(const Json& j);
ConservedEquivTransform conserved_transform_from_json(const Json& j);
PotentialEquivTransform potential_transform_from_json(const Json& j);

Json catalog_to_json(const Catalog& c);
Catalog catalog_from_json(const Json& j);

}  // namespace dcsym
