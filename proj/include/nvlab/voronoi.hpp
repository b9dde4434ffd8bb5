// Voronoi cells as star-shaped ray bundles: for each site point p and unit
// direction theta, the cell contains exactly the segment [p, p + T(theta,p)]
// with T the furthest parameter at which p still (weakly) wins. Bisection is
// valid because feasibility along a ray is downward closed in t.
#ifndef NVLAB_VORONOI_HPP
#define NVLAB_VORONOI_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "nvlab/scene.hpp"

namespace nvlab {

struct CellParams {
    int n_dirs = 512;    // uniform angles; sphere and site-pair directions added
    double tol = 1e-7;   // bisection tolerance, box units
};

struct Ray {
    Vec2 theta;  // gauge-unit direction
    double T = 0.0;
};

struct RayBundle {
    Vec2 p;                  // the site point the rays emanate from
    std::vector<Ray> rays;   // sorted by angle of theta
};

struct Cell {
    int k = 0;  // 0-based site index
    std::vector<RayBundle> bundles;
    CellParams params;

    double max_T() const;
};

// T(theta, p): largest t with p + t*theta inside the box and
// d(p + t*theta, p) <= d(p + t*theta, A_k). Inner approximation within tol.
double shoot_ray(const Scene& scene, int k, Vec2 p, Vec2 theta, double tol);

Cell compute_cell(const Scene& scene, int k, int n_dirs, double tol);

struct Diagram {
    const Scene* scene = nullptr;
    std::vector<Cell> cells;
};

// All cells; validates on a 200x200 grid that the computed bundles cover the
// whole box (no neutral region) up to a fan-resolution allowance. Coverage
// failure throws validation_error.
Diagram compute_diagram(const Scene& scene, int n_dirs, double tol);

// Membership in the star-shaped region described by a cell's bundles. `slack`
// widens the test outward (geometric units); exact sampled directions are
// honored so knife-edge rays count as members.
bool cell_contains(const Cell& cell, Vec2 x, double slack = 0.0);

// Euclidean distance from x to the fan polygonization of the cell (0 inside).
double cell_distance(const Cell& cell, Vec2 x);

// Points where d(x,P_k) - d(x,A_k) changes sign across a grid edge, refined
// to 1e-9 by bisection along the edge; grid points with |f| <= 1e-12 are
// included directly (this is what makes fat bisectors visible as 2D clouds).
struct BisectorSample {
    std::vector<Vec2> points;
    bool empty_flag = false;  // no sign change anywhere (site dominates box)
};

BisectorSample extract_bisector(const Scene& scene, int k, int resolution);

// Point cloud of a cell: every ray sampled at `density` points per unit
// length plus all endpoints. The cloud is within 1/density of the cell.
std::vector<Vec2> cell_point_cloud(const Cell& cell, int density);

// Hausdorff distance between two cells over the same box, through their
// point clouds; exact on the clouds, within ~1/density of the true value.
HausdorffReport cell_hausdorff(const NormSpec& norm, const Cell& c1, const Cell& c2,
                               int density);

struct LambdaEstimate {
    double epsilon = 0.0;
    double lambda_tilde = 0.0;  // sampled infimum of d(x,A) - d(x,p)
    double lambda = 0.0;        // min(epsilon/2, lambda_tilde)
    long sample_count = 0;
};

// Samples the uniform-penetration constant: x sits on [p, y] at gauge
// distance epsilon/2 before a cell point y; lambda_tilde is the smallest
// observed d(x, A_k) - d(x, p). Boundary-biased: every bundle direction
// contributes its endpoint deterministically, the rest are random ray points.
// Requires epsilon <= d(P_k, A_k)/2.
LambdaEstimate estimate_lambda(const Scene& scene, int k, double epsilon,
                               long n_samples, std::uint64_t seed = 1);

}  // namespace nvlab

#endif
