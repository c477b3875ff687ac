#pragma once

#include <string>

#include <json.hpp>

#include "packperc/geometry.hpp"

namespace packperc {

nlohmann::json shape_to_json(const Shape& s);
Shape shape_from_json(const nlohmann::json& j);

/// Schema: {"dimension": d, "overlap_tol": t, "shapes": [{"type": ...}, ...]}.
/// Doubles round-trip exactly (shortest decimal form).
nlohmann::json packing_to_json(const Packing& p);
Packing packing_from_json(const nlohmann::json& j);

std::string packing_to_string(const Packing& p);
Packing packing_from_string(const std::string& text);

}  // namespace packperc
