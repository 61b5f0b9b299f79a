#pragma once

#include <json.hpp>

namespace assess {

// Insertion-ordered so every emitted document has a fixed field order.
using Json = nlohmann::ordered_json;

}  // namespace assess
