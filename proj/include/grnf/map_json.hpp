#pragma once

#include <string>

#include "grnf/features.hpp"

namespace grnf {

// Versioned JSON encoding of a sampled map:
//   {version, M, seed, config, proposal?, params:[{k, theta_F, theta_H}], weights}
// theta_F concatenates the linear coefficients (bell(k+2)*channels) and the
// bias coefficients (bell(k)); theta_H concatenates the linear coefficients
// (bell(k)) and the scalar bias. Doubles are emitted in shortest
// round-tripping decimal form, so save/load is bit-exact.
std::string map_to_json(const GrnfMap& map);

// Parses and shape-checks a map document; throws ValidationError on malformed
// JSON, unknown version, or inconsistent sizes.
GrnfMap map_from_json(const std::string& text);

void save_map(const GrnfMap& map, const std::string& path);
GrnfMap load_map(const std::string& path);

}  // namespace grnf
