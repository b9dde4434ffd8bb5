#include "nvlab/general_position.hpp"

#include <cmath>
#include <limits>

namespace nvlab {

DirectionSet pair_directions(const NormSpec& norm, std::span<const Vec2> p,
                             std::span<const Vec2> a) {
    DirectionSet set;
    set.directions.reserve(2 * p.size() * a.size());
    for (const Vec2 x : p) {
        for (const Vec2 y : a) {
            const Vec2 u = gauge_normalize(norm, x - y);
            set.directions.push_back(u);
            set.directions.push_back({-u.x, -u.y});
        }
    }
    return set;
}

DirectionSet site_pair_directions(const Scene& scene) {
    DirectionSet set;
    for (int j = 0; j < scene.site_count(); ++j) {
        for (int k = j + 1; k < scene.site_count(); ++k) {
            for (const Vec2 p : scene.sites[j].points) {
                for (const Vec2 q : scene.sites[k].points) {
                    const Vec2 u = gauge_normalize(scene.norm, p - q);
                    set.directions.push_back(u);
                    set.directions.push_back({-u.x, -u.y});
                }
            }
        }
    }
    return set;
}

GPReport check_general_position(const Scene& scene) {
    GPReport report;
    const DirectionSet sphere = sphere_directions(scene.norm);
    if (sphere.directions.empty()) {
        // A rotund unit ball has no flat sphere pieces, so nothing to avoid.
        report.holds = true;
        return report;
    }

    for (int j = 0; j < scene.site_count(); ++j) {
        for (int k = j + 1; k < scene.site_count(); ++k) {
            for (const Vec2 p : scene.sites[j].points) {
                for (const Vec2 q : scene.sites[k].points) {
                    const Vec2 u = gauge_normalize(scene.norm, p - q);
                    for (const Vec2 s : sphere.directions) {
                        // A pair parallel to s is parallel to -s too; record
                        // the violation once, under the canonical sign.
                        const bool canonical = s.x > 0.0 || (s.x == 0.0 && s.y > 0.0);
                        if (canonical && std::abs(cross(u, s)) <= 1e-12) {
                            report.violations.push_back({j, k, p, q, s});
                        }
                        report.margin = std::min(report.margin, gauge(scene.norm, u - s));
                    }
                }
            }
        }
    }
    report.holds = report.violations.empty();
    return report;
}

}  // namespace nvlab
