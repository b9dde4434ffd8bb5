// Worlds, sites, distances and perturbations: a compact box X, a norm, and a
// tuple of finite point sites; Hausdorff distance between finite sets.
#ifndef NVLAB_SCENE_HPP
#define NVLAB_SCENE_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "nvlab/geometry.hpp"
#include "nvlab/norms.hpp"

namespace nvlab {

struct Site {
    std::vector<Vec2> points;  // nonempty
};

// The whole setting of one experiment. Immutable after load; freely shared.
struct Scene {
    Box box;
    NormSpec norm;
    std::vector<Site> sites;  // at least two, pairwise disjoint point sets
    std::string label;

    int site_count() const { return static_cast<int>(sites.size()); }
};

// Parses the line-oriented scene format (see README). Throws parse_error with
// the offending line number, or validation_error naming the broken invariant.
Scene load_scene(const std::string& text);

// 17-significant-digit serialization; load_scene(serialize_scene(s)) == s.
std::string serialize_scene(const Scene& scene);

bool operator==(const Scene& a, const Scene& b);

struct SiteDistance {
    double dist = 0.0;
    Vec2 nearest;     // attaining site point, lowest index on ties
    int point_index = 0;
};

// d(x, P_k) together with the attaining point.
SiteDistance site_distance(const Scene& scene, Vec2 x, int k);

// d(x, A_k): distance to the union of all sites other than k.
double competitor_distance(const Scene& scene, Vec2 x, int k);

// d(x, P_k) - d(x, A_k); negative strictly inside the cell of site k.
double signed_clearance(const Scene& scene, Vec2 x, int k);

struct HausdorffReport {
    double value = 0.0;
    bool infinite = false;  // set when one side is empty (D := +infinity)
    std::pair<Vec2, Vec2> witness_ab;  // attains sup_{a in A} d(a, B)
    std::pair<Vec2, Vec2> witness_ba;  // attains sup_{b in B} d(b, A)
    double sampling_error = 0.0;       // filled by cell_hausdorff
};

// Exact Hausdorff distance between finite point sets under the gauge.
// Accelerated by a uniform grid; identical to the brute-force value.
HausdorffReport hausdorff(const NormSpec& norm, std::span<const Vec2> a,
                          std::span<const Vec2> b);

// eta: the minimum gauge distance between points of distinct sites.
double min_pairwise_site_distance(const Scene& scene);

// Moves every site point by an independent random vector of gauge < delta,
// clamped into the box; deterministic for a fixed seed, and displacement
// magnitudes scale linearly in delta for a fixed seed.
Scene perturb_scene(const Scene& scene, double delta, std::uint64_t seed);

// The deterministic perturbation of the 20-site l1 counterexample: every
// non-center group member moves by beta toward its group center in the first
// coordinate. Only scenes labeled "ex61" qualify.
Scene perturb_scene_paper(const Scene& scene, double beta);

}  // namespace nvlab

#endif
