#pragma once

#include "draftvec/entities.hpp"

#include "json.hpp"

namespace draftvec::detail {

nlohmann::ordered_json to_json(const DrawingEntitySet& set);
DrawingEntitySet entity_set_from(const nlohmann::ordered_json& doc);

}  // namespace draftvec::detail
