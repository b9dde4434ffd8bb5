// Planar geometric primitives shared by every module.
#ifndef NVLAB_GEOMETRY_HPP
#define NVLAB_GEOMETRY_HPP

#include <algorithm>
#include <cmath>

namespace nvlab {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
    friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
    friend constexpr Vec2 operator*(double s, Vec2 v) { return {s * v.x, s * v.y}; }
    friend constexpr Vec2 operator*(Vec2 v, double s) { return {s * v.x, s * v.y}; }
    friend constexpr Vec2 operator/(Vec2 v, double s) { return {v.x / s, v.y / s}; }
    constexpr Vec2 operator-() const { return {-x, -y}; }
    friend constexpr bool operator==(Vec2 a, Vec2 b) { return a.x == b.x && a.y == b.y; }
};

constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }

// z-component of the 3D cross product; sign gives orientation.
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }

inline double norm2(Vec2 v) { return std::hypot(v.x, v.y); }

// Axis-aligned box [lo.x, hi.x] x [lo.y, hi.y].
struct Box {
    Vec2 lo;
    Vec2 hi;

    double width() const { return hi.x - lo.x; }
    double height() const { return hi.y - lo.y; }
    double max_side() const { return std::max(width(), height()); }

    bool contains(Vec2 p) const {
        return p.x >= lo.x && p.x <= hi.x && p.y >= lo.y && p.y <= hi.y;
    }

    Vec2 clamp(Vec2 p) const {
        return {std::clamp(p.x, lo.x, hi.x), std::clamp(p.y, lo.y, hi.y)};
    }

    friend constexpr bool operator==(const Box& a, const Box& b) {
        return a.lo == b.lo && a.hi == b.hi;
    }
};

// Largest t in [0, t_max] with p + t*dir still inside the box; p must be inside.
// Returns 0 when dir points immediately outward from the boundary.
double box_exit_param(const Box& box, Vec2 p, Vec2 dir, double t_max);

// Euclidean distance from a point to a segment [a, b].
double point_segment_distance(Vec2 p, Vec2 a, Vec2 b);

}  // namespace nvlab

#endif
