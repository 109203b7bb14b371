#pragma once

#include <string>

#include "json.hpp"
#include "srgrobust/lti.hpp"
#include "srgrobust/mrn.hpp"

namespace srg::io {

using Json = nlohmann::ordered_json;

Json load_json(const std::string& path);
void write_text(const std::string& path, const std::string& text);

// Nested real rows, or {"re": rows, "im": rows}; a top-level {"matrix": ...} wrapper is accepted.
MatC matrix_from_json(const Json& j);
MatR real_matrix_from_json(const Json& j);
Json matrix_to_json(const MatC& m);

// {"A": rows, "B": rows, "C": rows, "D": rows}; validated on return.
lti::StateSpace state_space_from_json(const Json& j);
Json state_space_to_json(const lti::StateSpace& s);

// {"type": "disc", "center": [re, im], "radius": r}, cone {alpha, beta}, sector {gamma, alpha, beta},
// half_plane {theta}, annulus_sector {gamma_lo, gamma_hi, arcs: [[lo, hi], ...]}, points {points: [[re, im], ...]},
// union / intersection {parts: [...]}, complement / mirror / inverse_negate {of, theta}, whole, empty.
geometry::Region region_from_json(const Json& j);

// "log:lo:hi:n"
lti::FrequencyGrid parse_grid(const std::string& spec);

Json verdict_to_json(const mrn::MrnVerdict& v);
Json verdict_to_json(const lti::RsVerdict& v);

// %.17g text of a double; inf and nan spelled out.
std::string fmt(double v);

}  // namespace srg::io
