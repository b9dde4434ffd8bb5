#include "nvlab/geometry.hpp"

namespace nvlab {

double box_exit_param(const Box& box, Vec2 p, Vec2 dir, double t_max) {
    double t = t_max;
    // Per axis: p + t*d must stay within [lo, hi].
    auto axis = [&t](double pos, double d, double lo, double hi) {
        if (d > 0.0) {
            t = std::min(t, (hi - pos) / d);
        } else if (d < 0.0) {
            t = std::min(t, (lo - pos) / d);
        }
    };
    axis(p.x, dir.x, box.lo.x, box.hi.x);
    axis(p.y, dir.y, box.lo.y, box.hi.y);
    return std::max(t, 0.0);
}

double point_segment_distance(Vec2 p, Vec2 a, Vec2 b) {
    const Vec2 ab = b - a;
    const double len2 = dot(ab, ab);
    if (len2 == 0.0) return norm2(p - a);
    const double t = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
    return norm2(p - (a + t * ab));
}

}  // namespace nvlab
