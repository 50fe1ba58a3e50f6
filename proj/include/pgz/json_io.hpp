#pragma once

#include "json.hpp"
#include "pgz/cyclo.hpp"

namespace pgz {

using json = nlohmann::json;

json rational_to_json(const Q& q);  // [num, den], big values as strings
Q rational_from_json(const json& j);
json cyc_to_json(const CycNum& x);
CycNum cyc_from_json(const json& j);
json mono_to_json(const Mono& m);

}  // namespace pgz
