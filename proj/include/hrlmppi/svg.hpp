#pragma once

#include <string>
#include <vector>

#include "hrlmppi/aggregate.hpp"

namespace hrlmppi {

// Mean curve with a +-std band per group, rendered as a standalone SVG.
void render_curves_svg(const std::vector<CurveGroup>& groups,
                       const std::string& title, const std::string& x_label,
                       const std::string& y_label, const std::string& path);

}  // namespace hrlmppi
