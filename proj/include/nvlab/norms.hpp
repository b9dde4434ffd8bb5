// Norms as Minkowski gauges: the lp family plus symmetric polygonal unit
// balls, the unit sphere's decomposition into flat faces, and the directions
// of segments contained in the sphere.
#ifndef NVLAB_NORMS_HPP
#define NVLAB_NORMS_HPP

#include <span>
#include <string>
#include <vector>

#include "nvlab/geometry.hpp"

namespace nvlab {

enum class NormKind { L1, L2, LInf, Polytope };

std::string norm_kind_name(NormKind kind);

// A norm on R^m. The lp members are closed-form; a Polytope norm is given by
// its unit ball, a centrally symmetric strictly convex polygon in R^2 listed
// counterclockwise. Construct through the factories so the invariants
// (symmetry within 1e-9, strict convexity, origin strictly inside) are
// checked once, at creation.
struct NormSpec {
    NormKind kind = NormKind::L2;
    int dimension = 2;
    std::vector<Vec2> vertices;  // Polytope only
    // Supporting functionals of the first half of the edges, filled by the
    // polytope factory so gauge evaluation is a plain max of dot products;
    // recomputed on the fly when a NormSpec was assembled by hand.
    std::vector<Vec2> edge_functionals;

    static NormSpec l1(int dimension = 2);
    static NormSpec l2(int dimension = 2);
    static NormSpec linf(int dimension = 2);
    static NormSpec polytope(std::vector<Vec2> vertices);

    friend bool operator==(const NormSpec& a, const NormSpec& b) {
        return a.kind == b.kind && a.dimension == b.dimension && a.vertices == b.vertices;
    }
};

// Gauge (Minkowski functional) of v. The planar overload serves the geometry
// engine; the span overload evaluates the lp closed forms in any dimension.
double gauge(const NormSpec& norm, Vec2 v);
double gauge(const NormSpec& norm, std::span<const double> v);

// v scaled to gauge 1. Undefined for v = 0 (input error).
Vec2 gauge_normalize(const NormSpec& norm, Vec2 v);

// The unit sphere split into maximal flat segments F_1..F_l plus at most one
// rotund remainder. The l2 sphere is all-rotund; polytopal spheres (including
// l1/linf in R^2) are all-flat.
struct FaceDecomposition {
    struct Flat {
        Vec2 a;
        Vec2 b;
    };
    std::vector<Flat> flats;
    bool has_rotund = false;
};

FaceDecomposition face_decomposition(const NormSpec& norm);

// A finite set of gauge-unit directions, closed under negation. `exact` marks
// sets obtained analytically (edge directions) rather than by sampling; every
// constructor here is analytic.
struct DirectionSet {
    std::vector<Vec2> directions;
    bool exact = true;

    bool contains_parallel(Vec2 dir, double cross_tol = 1e-12) const;
};

// Directions of nondegenerate segments contained in the unit sphere. Empty
// for l2 (strict convexity); for polytopal spheres one +/- pair per edge
// direction class.
DirectionSet sphere_directions(const NormSpec& norm);

struct TriangleEqualityResult {
    bool equality = false;           // |x1+x2| = |x1| + |x2| within 1e-9
    bool segment_on_sphere = false;  // [x1/|x1|, x2/|x2|] lies on the sphere
};

// The two views of the triangle-equality characterization: the booleans agree
// except possibly in a narrow numerical dead band around exact equality.
// The sphere test samples 64 points of the normalized segment; polytope-kind
// norms additionally decide exactly via shared-face membership.
TriangleEqualityResult triangle_equality_check(const NormSpec& norm, Vec2 x1, Vec2 x2);

// Equivalence constants c_low, c_high with
// c_low * |v|_2 <= gauge(v) <= c_high * |v|_2 for all v.
// Used to prune Euclidean spatial indexes without losing exactness.
struct GaugeBounds {
    double c_low = 1.0;
    double c_high = 1.0;
};

GaugeBounds gauge_euclidean_bounds(const NormSpec& norm);

}  // namespace nvlab

#endif
