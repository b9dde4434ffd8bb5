#include "nvlab/voronoi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "nvlab/parallel.hpp"
#include "nvlab/util.hpp"

namespace nvlab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Feasibility along a ray from p: the probe point stays in the box and p
// still (weakly) beats every competitor point. Downward closed in t.
bool ray_feasible(const Scene& scene, int k, Vec2 p, Vec2 theta, double t) {
    const Vec2 x = p + t * theta;
    if (!scene.box.contains(x)) return false;
    return gauge(scene.norm, x - p) <= competitor_distance(scene, x, k);
}

// Distance from q to the filled triangle (a, b, c); 0 inside. Degenerate
// triangles collapse to their edges.
double point_triangle_distance(Vec2 q, Vec2 a, Vec2 b, Vec2 c) {
    const double o = cross(b - a, c - a);
    const double s1 = cross(b - a, q - a);
    const double s2 = cross(c - b, q - b);
    const double s3 = cross(a - c, q - c);
    if (o > 0.0 && s1 >= 0.0 && s2 >= 0.0 && s3 >= 0.0) return 0.0;
    if (o < 0.0 && s1 <= 0.0 && s2 <= 0.0 && s3 <= 0.0) return 0.0;
    return std::min({point_segment_distance(q, a, b), point_segment_distance(q, b, c),
                     point_segment_distance(q, c, a)});
}

// The direction fan for one bundle: uniform angles, sphere segment
// directions, and the directions to every competitor point, so knife-edge
// rays are sampled along exactly representable vectors. Sorted by angle,
// exact duplicates removed.
std::vector<Vec2> bundle_directions(const Scene& scene, int k, Vec2 p, int n_dirs) {
    std::vector<Vec2> dirs;
    dirs.reserve(static_cast<std::size_t>(n_dirs) + 64);
    for (int i = 0; i < n_dirs; ++i) {
        const double a = kTwoPi * i / n_dirs;
        dirs.push_back(gauge_normalize(scene.norm, {std::cos(a), std::sin(a)}));
    }
    for (const Vec2 s : sphere_directions(scene.norm).directions) dirs.push_back(s);
    for (int j = 0; j < scene.site_count(); ++j) {
        if (j == k) continue;
        for (const Vec2 q : scene.sites[j].points) {
            const Vec2 u = gauge_normalize(scene.norm, q - p);
            dirs.push_back(u);
            dirs.push_back({-u.x, -u.y});
        }
    }
    std::sort(dirs.begin(), dirs.end(), [](Vec2 a, Vec2 b) {
        const double aa = std::atan2(a.y, a.x);
        const double ab = std::atan2(b.y, b.x);
        if (aa != ab) return aa < ab;
        if (a.x != b.x) return a.x < b.x;
        return a.y < b.y;
    });
    dirs.erase(std::unique(dirs.begin(), dirs.end()), dirs.end());
    return dirs;
}

}  // namespace

double Cell::max_T() const {
    double m = 0.0;
    for (const auto& bundle : bundles) {
        for (const auto& ray : bundle.rays) m = std::max(m, ray.T);
    }
    return m;
}

double shoot_ray(const Scene& scene, int k, Vec2 p, Vec2 theta, double tol) {
    if (k < 0 || k >= scene.site_count()) {
        throw validation_error("site index " + std::to_string(k) + " out of range");
    }
    if (!(tol > 0.0)) throw validation_error("ray tolerance must be positive");
    if (!(gauge(scene.norm, theta) > 0.0)) {
        throw validation_error("ray direction must be nonzero");
    }
    if (!scene.box.contains(p)) {
        throw validation_error("ray base point lies outside the box");
    }

    const double t_box =
        box_exit_param(scene.box, p, theta, std::numeric_limits<double>::infinity());
    if (ray_feasible(scene, k, p, theta, t_box)) return t_box;

    // Invariant: feasible at lo, infeasible at hi. t = 0 is always feasible
    // (sites are pairwise disjoint). Midpoints stay dyadic, so exact equality
    // of distances along knife-edge rays survives the refinement.
    double lo = 0.0;
    double hi = t_box;
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (ray_feasible(scene, k, p, theta, mid)) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return lo;
}

Cell compute_cell(const Scene& scene, int k, int n_dirs, double tol) {
    if (k < 0 || k >= scene.site_count()) {
        throw validation_error("site index " + std::to_string(k) + " out of range");
    }
    if (n_dirs < 4) throw validation_error("n_dirs must be at least 4");
    if (!(tol > 0.0)) throw validation_error("tolerance must be positive");

    Cell cell;
    cell.k = k;
    cell.params = {n_dirs, tol};
    for (const Vec2 p : scene.sites[k].points) {
        RayBundle bundle;
        bundle.p = p;
        const std::vector<Vec2> dirs = bundle_directions(scene, k, p, n_dirs);
        bundle.rays.resize(dirs.size());
        parallel_for(dirs.size(), [&](std::size_t i) {
            bundle.rays[i] = {dirs[i], shoot_ray(scene, k, p, dirs[i], tol)};
        });
        cell.bundles.push_back(std::move(bundle));
    }
    return cell;
}

double cell_distance(const Cell& cell, Vec2 x) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& bundle : cell.bundles) {
        const auto& rays = bundle.rays;
        if (rays.empty()) continue;
        const Vec2 v = x - bundle.p;
        if (v.x == 0.0 && v.y == 0.0) return 0.0;
        if (rays.size() == 1) {
            best = std::min(best, point_segment_distance(x, bundle.p,
                                                         bundle.p + rays[0].T * rays[0].theta));
            continue;
        }
        for (std::size_t i = 0; i < rays.size(); ++i) {
            const std::size_t j = (i + 1) % rays.size();
            const Vec2 a = bundle.p + rays[i].T * rays[i].theta;
            const Vec2 b = bundle.p + rays[j].T * rays[j].theta;
            best = std::min(best, point_triangle_distance(x, bundle.p, a, b));
            if (best == 0.0) return 0.0;
        }
    }
    return best;
}

bool cell_contains(const Cell& cell, Vec2 x, double slack) {
    for (const auto& bundle : cell.bundles) {
        const Vec2 v = x - bundle.p;
        if (v.x == 0.0 && v.y == 0.0) return true;
        for (const auto& ray : bundle.rays) {
            if (cross(ray.theta, v) == 0.0 && dot(ray.theta, v) > 0.0) {
                const double overshoot = norm2(v) - ray.T * norm2(ray.theta);
                if (overshoot <= slack) return true;
            }
        }
    }
    return cell_distance(cell, x) <= slack;
}

Diagram compute_diagram(const Scene& scene, int n_dirs, double tol) {
    Diagram diagram;
    diagram.scene = &scene;
    for (int k = 0; k < scene.site_count(); ++k) {
        diagram.cells.push_back(compute_cell(scene, k, n_dirs, tol));
    }

    // Every point of the box belongs to some cell (the nearest site's), so
    // the bundles of the diagram must cover a probe grid up to the fan
    // resolution: a fan of n_dirs rays can sag below the true boundary by
    // about max_T * (angle step) near sloped walls.
    const int grid = 200;
    std::vector<double> allowance(diagram.cells.size());
    for (std::size_t c = 0; c < diagram.cells.size(); ++c) {
        allowance[c] = tol + diagram.cells[c].max_T() * (kTwoPi / n_dirs);
    }
    std::vector<unsigned char> missed(static_cast<std::size_t>(grid) * grid, 0);
    parallel_for(static_cast<std::size_t>(grid) * grid, [&](std::size_t idx) {
        const int iy = static_cast<int>(idx) / grid;
        const int ix = static_cast<int>(idx) % grid;
        const Vec2 x{scene.box.lo.x + (ix + 0.5) * scene.box.width() / grid,
                     scene.box.lo.y + (iy + 0.5) * scene.box.height() / grid};
        int k_near = 0;
        double d_near = std::numeric_limits<double>::infinity();
        for (int k = 0; k < scene.site_count(); ++k) {
            const double d = site_distance(scene, x, k).dist;
            if (d < d_near) {
                d_near = d;
                k_near = k;
            }
        }
        if (cell_distance(diagram.cells[k_near], x) <= allowance[k_near]) return;
        for (std::size_t c = 0; c < diagram.cells.size(); ++c) {
            if (static_cast<int>(c) == k_near) continue;
            if (cell_distance(diagram.cells[c], x) <= allowance[c]) return;
        }
        missed[idx] = 1;
    });
    for (std::size_t idx = 0; idx < missed.size(); ++idx) {
        if (!missed[idx]) continue;
        const int iy = static_cast<int>(idx) / grid;
        const int ix = static_cast<int>(idx) % grid;
        const Vec2 x{scene.box.lo.x + (ix + 0.5) * scene.box.width() / grid,
                     scene.box.lo.y + (iy + 0.5) * scene.box.height() / grid};
        throw validation_error("diagram coverage check failed: point (" +
                               format_double(x.x) + ", " + format_double(x.y) +
                               ") lies in no computed cell");
    }
    return diagram;
}

BisectorSample extract_bisector(const Scene& scene, int k, int resolution) {
    if (k < 0 || k >= scene.site_count()) {
        throw validation_error("site index " + std::to_string(k) + " out of range");
    }
    if (resolution < 2 || resolution > 8192) {
        throw validation_error("bisector resolution must lie in [2, 8192]");
    }

    const int n = resolution + 1;  // grid nodes, box edges included
    const double sx = scene.box.width() / resolution;
    const double sy = scene.box.height() / resolution;
    auto node = [&](int ix, int iy) {
        return Vec2{scene.box.lo.x + ix * sx, scene.box.lo.y + iy * sy};
    };

    std::vector<double> f(static_cast<std::size_t>(n) * n);
    parallel_for(f.size(), [&](std::size_t idx) {
        const int iy = static_cast<int>(idx) / n;
        const int ix = static_cast<int>(idx) % n;
        f[idx] = signed_clearance(scene, node(ix, iy), k);
    });
    auto fat = [&](int ix, int iy) { return f[static_cast<std::size_t>(iy) * n + ix]; };

    constexpr double kZeroBand = 1e-12;
    constexpr double kRefine = 1e-9;
    auto sign_of = [&](double v) { return v > kZeroBand ? 1 : (v < -kZeroBand ? -1 : 0); };

    // Root of f along the segment [a, b] given strictly opposite signs.
    auto edge_root = [&](Vec2 a, double fa, Vec2 b) {
        const int sa = sign_of(fa);
        while (norm2(b - a) > kRefine) {
            const Vec2 m = 0.5 * (a + b);
            const double fm = signed_clearance(scene, m, k);
            const int sm = sign_of(fm);
            if (sm == 0) return m;
            if (sm == sa) {
                a = m;
            } else {
                b = m;
            }
        }
        return 0.5 * (a + b);
    };

    std::vector<std::vector<Vec2>> rows(n);
    parallel_for(static_cast<std::size_t>(n), [&](std::size_t row) {
        const int iy = static_cast<int>(row);
        auto& out = rows[row];
        for (int ix = 0; ix < n; ++ix) {
            const double f0 = fat(ix, iy);
            if (sign_of(f0) == 0) out.push_back(node(ix, iy));
            if (ix + 1 < n) {
                const double f1 = fat(ix + 1, iy);
                if (sign_of(f0) * sign_of(f1) == -1) {
                    out.push_back(edge_root(node(ix, iy), f0, node(ix + 1, iy)));
                }
            }
            if (iy + 1 < n) {
                const double f1 = fat(ix, iy + 1);
                if (sign_of(f0) * sign_of(f1) == -1) {
                    out.push_back(edge_root(node(ix, iy), f0, node(ix, iy + 1)));
                }
            }
        }
    });

    BisectorSample sample;
    for (auto& row : rows) {
        sample.points.insert(sample.points.end(), row.begin(), row.end());
    }
    sample.empty_flag = sample.points.empty();
    return sample;
}

std::vector<Vec2> cell_point_cloud(const Cell& cell, int density) {
    if (density < 1) throw validation_error("cloud density must be at least 1");
    std::vector<Vec2> cloud;
    for (const auto& bundle : cell.bundles) {
        cloud.push_back(bundle.p);
        for (const auto& ray : bundle.rays) {
            const double len = ray.T * norm2(ray.theta);
            const int steps = std::max(1, static_cast<int>(std::ceil(len * density)));
            for (int s = 1; s <= steps; ++s) {
                cloud.push_back(bundle.p + (ray.T * s / steps) * ray.theta);
            }
        }
    }
    return cloud;
}

HausdorffReport cell_hausdorff(const NormSpec& norm, const Cell& c1, const Cell& c2,
                               int density) {
    const std::vector<Vec2> a = cell_point_cloud(c1, density);
    const std::vector<Vec2> b = cell_point_cloud(c2, density);
    HausdorffReport report = hausdorff(norm, a, b);
    const double fan_gap = std::max(c1.max_T() * std::numbers::pi / c1.params.n_dirs,
                                    c2.max_T() * std::numbers::pi / c2.params.n_dirs);
    report.sampling_error =
        gauge_euclidean_bounds(norm).c_high * (0.5 / density + fan_gap);
    return report;
}

LambdaEstimate estimate_lambda(const Scene& scene, int k, double epsilon,
                               long n_samples, std::uint64_t seed) {
    if (k < 0 || k >= scene.site_count()) {
        throw validation_error("site index " + std::to_string(k) + " out of range");
    }
    if (n_samples < 1) throw validation_error("sample count must be at least 1");
    double separation = std::numeric_limits<double>::infinity();
    for (const Vec2 p : scene.sites[k].points) {
        for (int j = 0; j < scene.site_count(); ++j) {
            if (j == k) continue;
            for (const Vec2 q : scene.sites[j].points) {
                separation = std::min(separation, gauge(scene.norm, p - q));
            }
        }
    }
    if (!(epsilon > 0.0) || !(epsilon <= separation / 2.0)) {
        throw validation_error("epsilon must lie in (0, d(P_k, A_k)/2] = (0, " +
                               format_double(separation / 2.0) + "]");
    }

    const Cell cell = compute_cell(scene, k, 512, 1e-9);
    const double half = epsilon / 2.0;

    LambdaEstimate est;
    est.epsilon = epsilon;
    est.lambda_tilde = std::numeric_limits<double>::infinity();

    auto probe = [&](Vec2 p, Vec2 theta, double t_y) {
        // x sits on [p, y] at gauge distance epsilon/2 before y = p + t_y*theta.
        const Vec2 x = p + (t_y - half) * theta;
        const double value =
            competitor_distance(scene, x, k) - gauge(scene.norm, x - p);
        est.lambda_tilde = std::min(est.lambda_tilde, value);
        ++est.sample_count;
    };

    // Deterministic pass: the far endpoint of every ray long enough to carry
    // a sample. This pins the estimate across seeds; the random pass below
    // only explores the ray interiors.
    for (const auto& bundle : cell.bundles) {
        for (const auto& ray : bundle.rays) {
            if (ray.T >= half) probe(bundle.p, ray.theta, ray.T);
        }
    }

    struct RayRef {
        const RayBundle* bundle;
        const Ray* ray;
    };
    std::vector<RayRef> rays;
    for (const auto& bundle : cell.bundles) {
        for (const auto& ray : bundle.rays) {
            if (ray.T >= half) rays.push_back({&bundle, &ray});
        }
    }
    if (!rays.empty()) {
        std::mt19937_64 rng(seed);
        std::uniform_int_distribution<std::size_t> pick(0, rays.size() - 1);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        for (long s = est.sample_count; s < n_samples; ++s) {
            const RayRef ref = rays[pick(rng)];
            const double t_y = half + unit(rng) * (ref.ray->T - half);
            probe(ref.bundle->p, ref.ray->theta, t_y);
        }
    }

    est.lambda = std::min(half, est.lambda_tilde);
    return est;
}

}  // namespace nvlab
