// The general-position condition: no segment between points of two different
// sites may be parallel to a segment of the unit sphere. Checked exactly,
// with a quantitative margin.
#ifndef NVLAB_GENERAL_POSITION_HPP
#define NVLAB_GENERAL_POSITION_HPP

#include <limits>
#include <vector>

#include "nvlab/norms.hpp"
#include "nvlab/scene.hpp"

namespace nvlab {

// Gauge-normalized directions (p - a)/|p - a| over all cross pairs, closed
// under negation. Building block for site_pair_directions and the direction
// perturbation bound.
DirectionSet pair_directions(const NormSpec& norm, std::span<const Vec2> p,
                             std::span<const Vec2> a);

// All inter-site pair directions of a scene.
DirectionSet site_pair_directions(const Scene& scene);

struct GPViolation {
    int j = 0;  // site indices, 0-based
    int k = 0;
    Vec2 pj;
    Vec2 pk;
    Vec2 sphere_dir;  // the sphere segment direction the pair is parallel to
};

struct GPReport {
    bool holds = false;
    std::vector<GPViolation> violations;
    // Minimum gauge distance from any pair direction to the sphere direction
    // set; +infinity when the sphere contains no segments.
    double margin = std::numeric_limits<double>::infinity();
};

// Parallelism against sphere flats is decided exactly (cross product within
// 1e-12 after normalization), not through the margin, so knife-edge
// configurations are classified as violations rather than "tiny margin".
GPReport check_general_position(const Scene& scene);

}  // namespace nvlab

#endif
