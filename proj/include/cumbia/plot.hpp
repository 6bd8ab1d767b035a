#pragma once

#include <string>
#include <vector>

#include "cumbia/embedding.hpp"
#include "cumbia/io.hpp"

namespace cumbia::plot {

/// Points to scatter: one row per object.
struct ScatterPoints {
  MatrixXd coordinates;
  std::vector<ObjectKind> kinds;
  std::vector<std::string> labels;
};

ScatterPoints points_of(const Embedding& e);
ScatterPoints points_of(const BiplotCoordinates& b);

/// Standalone SVG scatter of columns component_x vs component_y (0-based).
///
/// Samples are filled circles, variables small crosses. With an empty
/// color_by map samples and variables get one hue each; otherwise each group
/// gets a palette color in sorted group order and unlisted objects are grey.
std::string scatter_svg(const ScatterPoints& points, Eigen::Index component_x, Eigen::Index component_y,
                        const io::LabelMap& color_by = {});

/// Bar chart of scree fractions.
std::string scree_svg(const Scree& s, const std::string& title);

}  // namespace cumbia::plot
