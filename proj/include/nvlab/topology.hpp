// Grid-scale verification that cell boundaries are exactly the bisectors:
// sign structure of f(x) = d(x,P_k) - d(x,A_k) on a grid, fat-bisector
// detection, and the boundary/interior/closure checks. These are falsifiable
// numerical surrogates of exact set statements, never proofs.
#ifndef NVLAB_TOPOLOGY_HPP
#define NVLAB_TOPOLOGY_HPP

#include <optional>
#include <string>
#include <vector>

#include "nvlab/general_position.hpp"
#include "nvlab/scene.hpp"

namespace nvlab {

// f sampled at the centers of a resolution x resolution grid of box cells.
struct GridField {
    int resolution = 0;
    std::vector<double> values;  // row-major, rows bottom to top
    double cell_size = 0.0;      // box width / resolution
    Box box;
    int k = 0;

    double at(int ix, int iy) const { return values[static_cast<size_t>(iy) * resolution + ix]; }
    Vec2 center(int ix, int iy) const;
};

// Valid resolutions: 64..4096.
GridField grid_classify(const Scene& scene, int k, int resolution);

struct FatBisectorResult {
    bool fat = false;
    std::optional<Vec2> witness;  // center of the first all-|f|<=tol 3x3 block
};

// Fat means: some grid cell and all 8 neighbors have |f| <= tol, i.e. the
// equality set has interior at grid scale. Default tol: 1e-9 x box diagonal.
FatBisectorResult fat_bisector_detect(const GridField& field, double tol);

double default_topology_tol(const Box& box);

struct BoundaryCheckStatement {
    bool pass = true;
    long checked = 0;
    long failures = 0;
    std::optional<Vec2> counterexample;
};

struct BoundaryCheckReport {
    bool applicable = false;  // false when the scene is not in general position
    GPReport gp;
    int resolution = 0;
    double tol = 0.0;
    // Threshold actually used by the interior statement: the Lipschitz bound
    // |f(x)-f(y)| <= 2|x-y| lifts tol to max(tol, 2 * max gauge step between
    // 8-neighbors), below which "interior at grid scale" is not certifiable.
    double interior_threshold = 0.0;
    BoundaryCheckStatement boundary;  // |f| <= tol sees both signs within 2 cells
    BoundaryCheckStatement interior;  // f < -threshold keeps all 8 neighbors < 0
    BoundaryCheckStatement closure;   // f <= tol has f < -tol within 2 cells

    bool all_pass() const { return boundary.pass && interior.pass && closure.pass; }
};

BoundaryCheckReport boundary_bisector_check(const Scene& scene, int k, int resolution,
                                            double tol);

// Human-readable report with PASS/FAIL lines and witness coordinates; the
// header documents the derived neighborhood radii and thresholds.
std::string render_boundary_report(const BoundaryCheckReport& report);

}  // namespace nvlab

#endif
