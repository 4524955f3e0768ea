#pragma once

// Plain-text rendering of the JSON reports.  Scalars print as `key: value`,
// arrays of objects as aligned tables whose last column may contain spaces.

#include <string>

#include "json.hpp"

namespace twistlab::cli {

std::string render_text(const nlohmann::ordered_json& j);

} // namespace twistlab::cli
