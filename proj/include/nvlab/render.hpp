// Deterministic SVG output: one filled ray-bundle region per cell, site
// points as dots, optional bisector overlay.
#ifndef NVLAB_RENDER_HPP
#define NVLAB_RENDER_HPP

#include <string>
#include <vector>

#include "nvlab/voronoi.hpp"

namespace nvlab {

struct RenderStyle {
    int width = 800;            // pixel width; height follows the box aspect
    double margin = 24.0;       // pixels around the box
    bool draw_sites = true;
    bool draw_box = true;
    std::vector<Vec2> bisector_overlay;  // optional extra point layer
};

// Same diagram and style produce byte-identical output. Coordinates are
// always finite; nonfinite values are rejected before serialization.
std::string render_svg(const Diagram& diagram, const RenderStyle& style = {});

}  // namespace nvlab

#endif
