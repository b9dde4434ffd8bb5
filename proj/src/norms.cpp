#include "nvlab/norms.hpp"

#include <cmath>
#include <cstddef>
#include <limits>

#include "nvlab/util.hpp"

namespace nvlab {

namespace {

constexpr double kVertexSymmetryTol = 1e-9;

// Canonical unit balls of the planar closed-form norms, counterclockwise.
const std::vector<Vec2>& l1_ball_vertices() {
    static const std::vector<Vec2> v{{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    return v;
}

const std::vector<Vec2>& linf_ball_vertices() {
    static const std::vector<Vec2> v{{1, 1}, {-1, 1}, {-1, -1}, {1, -1}};
    return v;
}

bool is_polytopal(const NormSpec& norm) {
    return norm.kind != NormKind::L2;
}

// Vertex list of the unit ball for any polytopal kind.
const std::vector<Vec2>& ball_vertices(const NormSpec& norm) {
    switch (norm.kind) {
        case NormKind::L1: return l1_ball_vertices();
        case NormKind::LInf: return linf_ball_vertices();
        case NormKind::Polytope: return norm.vertices;
        case NormKind::L2: break;
    }
    throw validation_error("the l2 sphere has no vertex representation");
}

// Supporting functionals f_i with gauge(v) = max_i |dot(f_i, v)|, one per
// edge of the first half of the (centrally symmetric) vertex list. Using
// only half the edges with |.| keeps gauge(v) == gauge(-v) bit-exact.
std::vector<Vec2> half_edge_functionals(const std::vector<Vec2>& verts) {
    const std::size_t n = verts.size();
    std::vector<Vec2> funcs;
    funcs.reserve(n / 2);
    for (std::size_t i = 0; i < n / 2; ++i) {
        const Vec2 a = verts[i];
        const Vec2 b = verts[(i + 1) % n];
        const Vec2 e = b - a;
        const Vec2 normal{e.y, -e.x};  // outward for counterclockwise order
        const double c = dot(normal, a);
        funcs.push_back(normal / c);
    }
    return funcs;
}

void validate_polytope(const std::vector<Vec2>& verts) {
    const std::size_t n = verts.size();
    if (n < 4 || n % 2 != 0) {
        throw validation_error("polytope ball needs an even vertex count >= 4, got " +
                               std::to_string(n));
    }
    for (std::size_t i = 0; i < n / 2; ++i) {
        const Vec2 mirror = verts[i + n / 2];
        if (std::abs(mirror.x + verts[i].x) > kVertexSymmetryTol ||
            std::abs(mirror.y + verts[i].y) > kVertexSymmetryTol) {
            throw validation_error("polytope ball is not centrally symmetric at vertex " +
                                   std::to_string(i));
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 a = verts[i];
        const Vec2 b = verts[(i + 1) % n];
        const Vec2 c = verts[(i + 2) % n];
        const Vec2 e1 = b - a;
        const Vec2 e2 = c - b;
        const double turn = cross(e1, e2);
        if (turn <= 1e-12 * norm2(e1) * norm2(e2)) {
            throw validation_error(
                "polytope ball must be strictly convex and counterclockwise "
                "(violated at vertex " + std::to_string((i + 1) % n) + ")");
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 a = verts[i];
        const Vec2 b = verts[(i + 1) % n];
        const Vec2 e = b - a;
        if (dot(Vec2{e.y, -e.x}, a) <= 0.0) {
            throw validation_error("origin is not strictly inside the polytope ball");
        }
    }
}

double polytope_gauge(const NormSpec& norm, Vec2 v) {
    double g = 0.0;
    if (norm.edge_functionals.size() == norm.vertices.size() / 2) {
        for (const Vec2 f : norm.edge_functionals) g = std::max(g, std::abs(dot(f, v)));
    } else {
        for (const Vec2 f : half_edge_functionals(norm.vertices)) {
            g = std::max(g, std::abs(dot(f, v)));
        }
    }
    return g;
}

}  // namespace

std::string norm_kind_name(NormKind kind) {
    switch (kind) {
        case NormKind::L1: return "l1";
        case NormKind::L2: return "l2";
        case NormKind::LInf: return "linf";
        case NormKind::Polytope: return "polytope";
    }
    return "?";
}

NormSpec NormSpec::l1(int dimension) {
    if (dimension < 2) throw validation_error("norm dimension must be >= 2");
    return {NormKind::L1, dimension, {}};
}

NormSpec NormSpec::l2(int dimension) {
    if (dimension < 2) throw validation_error("norm dimension must be >= 2");
    return {NormKind::L2, dimension, {}};
}

NormSpec NormSpec::linf(int dimension) {
    if (dimension < 2) throw validation_error("norm dimension must be >= 2");
    return {NormKind::LInf, dimension, {}};
}

NormSpec NormSpec::polytope(std::vector<Vec2> vertices) {
    validate_polytope(vertices);
    NormSpec spec{NormKind::Polytope, 2, std::move(vertices), {}};
    spec.edge_functionals = half_edge_functionals(spec.vertices);
    return spec;
}

double gauge(const NormSpec& norm, Vec2 v) {
    switch (norm.kind) {
        case NormKind::L1: return std::abs(v.x) + std::abs(v.y);
        case NormKind::L2: return std::hypot(v.x, v.y);
        case NormKind::LInf: return std::max(std::abs(v.x), std::abs(v.y));
        case NormKind::Polytope: return polytope_gauge(norm, v);
    }
    return 0.0;
}

double gauge(const NormSpec& norm, std::span<const double> v) {
    if (static_cast<int>(v.size()) != norm.dimension) {
        throw validation_error("gauge: vector has dimension " + std::to_string(v.size()) +
                               ", norm expects " + std::to_string(norm.dimension));
    }
    switch (norm.kind) {
        case NormKind::L1: {
            double s = 0.0;
            for (double c : v) s += std::abs(c);
            return s;
        }
        case NormKind::L2: {
            double s = 0.0;
            for (double c : v) s += c * c;
            return std::sqrt(s);
        }
        case NormKind::LInf: {
            double s = 0.0;
            for (double c : v) s = std::max(s, std::abs(c));
            return s;
        }
        case NormKind::Polytope:
            return polytope_gauge(norm, Vec2{v[0], v[1]});
    }
    return 0.0;
}

Vec2 gauge_normalize(const NormSpec& norm, Vec2 v) {
    const double g = gauge(norm, v);
    if (g == 0.0) throw validation_error("cannot normalize the zero vector");
    return v / g;
}

FaceDecomposition face_decomposition(const NormSpec& norm) {
    FaceDecomposition fd;
    if (norm.kind == NormKind::L2) {
        fd.has_rotund = true;
        return fd;
    }
    const auto& verts = ball_vertices(norm);
    const std::size_t n = verts.size();
    fd.flats.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        fd.flats.push_back({verts[i], verts[(i + 1) % n]});
    }
    return fd;
}

DirectionSet sphere_directions(const NormSpec& norm) {
    DirectionSet set;
    if (norm.kind == NormKind::L2) return set;  // strictly convex: no segments
    const auto& verts = ball_vertices(norm);
    const std::size_t n = verts.size();
    // Edges i and i + n/2 of a symmetric polygon are antiparallel; emitting
    // +/- theta from the first half yields every direction class exactly once
    // and keeps the set exactly closed under negation.
    set.directions.reserve(n);
    for (std::size_t i = 0; i < n / 2; ++i) {
        const Vec2 d = verts[(i + 1) % n] - verts[i];
        const Vec2 theta = d / gauge(norm, d);
        set.directions.push_back(theta);
        set.directions.push_back(-theta);
    }
    return set;
}

bool DirectionSet::contains_parallel(Vec2 dir, double cross_tol) const {
    for (const Vec2 theta : directions) {
        if (std::abs(cross(dir, theta)) <= cross_tol) return true;
    }
    return false;
}

TriangleEqualityResult triangle_equality_check(const NormSpec& norm, Vec2 x1, Vec2 x2) {
    const double g1 = gauge(norm, x1);
    const double g2 = gauge(norm, x2);
    if (g1 == 0.0 || g2 == 0.0) {
        throw validation_error("triangle_equality_check requires nonzero vectors");
    }
    TriangleEqualityResult r;
    r.equality = std::abs(gauge(norm, x1 + x2) - (g1 + g2)) <= 1e-9;

    const Vec2 u = x1 / g1;
    const Vec2 v = x2 / g2;

    if (is_polytopal(norm)) {
        // Exact route: the normalized segment lies on the sphere iff both
        // endpoints lie on one closed face.
        const auto fd = face_decomposition(norm);
        for (const auto& flat : fd.flats) {
            const Vec2 e = flat.b - flat.a;
            const double len2 = dot(e, e);
            auto on_face = [&](Vec2 q) {
                if (std::abs(cross(e, q - flat.a)) > 1e-9 * norm2(e)) return false;
                const double t = dot(q - flat.a, e) / len2;
                return t >= -1e-9 && t <= 1.0 + 1e-9;
            };
            if (on_face(u) && on_face(v)) {
                r.segment_on_sphere = true;
                return r;
            }
        }
    }

    // Sampled route: 64 evenly spaced points of [u, v], endpoints included.
    bool on_sphere = true;
    for (int i = 0; i < 64; ++i) {
        const double t = static_cast<double>(i) / 63.0;
        if (std::abs(gauge(norm, (1.0 - t) * u + t * v) - 1.0) > 1e-9) {
            on_sphere = false;
            break;
        }
    }
    r.segment_on_sphere = on_sphere;
    return r;
}

GaugeBounds gauge_euclidean_bounds(const NormSpec& norm) {
    if (norm.kind == NormKind::L2) return {1.0, 1.0};
    const auto& verts = ball_vertices(norm);
    double max_vertex_radius = 0.0;
    for (const Vec2 v : verts) max_vertex_radius = std::max(max_vertex_radius, norm2(v));
    double inradius = std::numeric_limits<double>::infinity();
    const std::size_t n = verts.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 a = verts[i];
        const Vec2 e = verts[(i + 1) % n] - a;
        // Distance from the origin to the edge's supporting line.
        inradius = std::min(inradius, std::abs(cross(e, a)) / norm2(e));
    }
    return {1.0 / max_vertex_radius, 1.0 / inradius};
}

}  // namespace nvlab
