#pragma once

#include <string>
#include <vector>

#include "srgrobust/profile.hpp"

namespace srg::plot {

// Oblique view of the surface {(phi e^{i theta}, gamma)}: one polyline per theta slice.
// Infinite gains are drawn at the top of the frame.
std::string profile_svg(const profile::ThetaProfile& p, const std::string& title);

// Scatter of complex points with the unit circle and axes for scale.
std::string points_svg(const std::vector<cplx>& pts, const std::string& title);

}  // namespace srg::plot
