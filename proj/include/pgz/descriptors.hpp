#pragma once

#include "pgz/json_io.hpp"
#include "pgz/local.hpp"

namespace pgz {

// Mono as {"rational": q, "root": e}, a bare rational, or a string "zeta(n)^k"
Mono mono_from_json(const json& j);

LocalDatum datum_from_json(const json& j);
json datum_to_json(const LocalDatum& d);

// {p, quad_type, u0?, place?, conductor, gen_values, at_uniformizer} on the field E_w of the datum
MulChar character_from_json(const json& j);
json character_to_json(const MulChar& chi, const LocalDatum& d);

// field carrying the characters of a datum (E_w for one place)
LocalField character_field(const LocalDatum& d);

}  // namespace pgz
