#include "nvlab/topology.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nvlab/parallel.hpp"
#include "nvlab/util.hpp"

namespace nvlab {

Vec2 GridField::center(int ix, int iy) const {
    return {box.lo.x + (ix + 0.5) * box.width() / resolution,
            box.lo.y + (iy + 0.5) * box.height() / resolution};
}

GridField grid_classify(const Scene& scene, int k, int resolution) {
    if (k < 0 || k >= scene.site_count()) {
        throw validation_error("site index " + std::to_string(k) + " out of range");
    }
    if (resolution < 64 || resolution > 4096) {
        throw validation_error("grid resolution must lie in [64, 4096]");
    }
    GridField field;
    field.resolution = resolution;
    field.box = scene.box;
    field.k = k;
    field.cell_size = scene.box.width() / resolution;
    field.values.resize(static_cast<std::size_t>(resolution) * resolution);
    parallel_for(field.values.size(), [&](std::size_t idx) {
        const int iy = static_cast<int>(idx) / resolution;
        const int ix = static_cast<int>(idx) % resolution;
        field.values[idx] = signed_clearance(scene, field.center(ix, iy), k);
    });
    return field;
}

FatBisectorResult fat_bisector_detect(const GridField& field, double tol) {
    const int n = field.resolution;
    for (int iy = 1; iy + 1 < n; ++iy) {
        for (int ix = 1; ix + 1 < n; ++ix) {
            bool all = true;
            for (int dy = -1; dy <= 1 && all; ++dy) {
                for (int dx = -1; dx <= 1; ++dx) {
                    if (std::abs(field.at(ix + dx, iy + dy)) > tol) {
                        all = false;
                        break;
                    }
                }
            }
            if (all) return {true, field.center(ix, iy)};
        }
    }
    return {false, std::nullopt};
}

double default_topology_tol(const Box& box) {
    return 1e-9 * norm2(box.hi - box.lo);
}

BoundaryCheckReport boundary_bisector_check(const Scene& scene, int k, int resolution,
                                            double tol) {
    if (!(tol > 0.0)) throw validation_error("topology tolerance must be positive");
    BoundaryCheckReport report;
    report.gp = check_general_position(scene);
    report.resolution = resolution;
    report.tol = tol;
    report.applicable = report.gp.holds;
    if (!report.applicable) return report;

    const GridField field = grid_classify(scene, k, resolution);
    const int n = resolution;
    const double sx = field.box.width() / n;
    const double sy = field.box.height() / n;

    // |f(x) - f(y)| <= 2 d(x, y), so between diagonal neighbors f can move
    // by twice the largest neighbor step. Below that, a strict sign on a
    // single grid cell cannot certify anything about its neighbors.
    const double step = std::max({gauge(scene.norm, {sx, 0.0}), gauge(scene.norm, {0.0, sy}),
                                  gauge(scene.norm, {sx, sy}), gauge(scene.norm, {sx, -sy})});
    report.interior_threshold = std::max(tol, 2.0 * step);

    auto scan = [&](auto premise, auto conclude) {
        BoundaryCheckStatement stmt;
        for (int iy = 0; iy < n; ++iy) {
            for (int ix = 0; ix < n; ++ix) {
                if (!premise(field.at(ix, iy))) continue;
                ++stmt.checked;
                if (conclude(ix, iy)) continue;
                ++stmt.failures;
                if (!stmt.counterexample) stmt.counterexample = field.center(ix, iy);
            }
        }
        stmt.pass = stmt.failures == 0;
        return stmt;
    };

    auto neighborhood_has = [&](int ix, int iy, int radius, auto pred) {
        for (int dy = -radius; dy <= radius; ++dy) {
            for (int dx = -radius; dx <= radius; ++dx) {
                const int jx = ix + dx;
                const int jy = iy + dy;
                if (jx < 0 || jx >= n || jy < 0 || jy >= n) continue;
                if (pred(field.at(jx, jy))) return true;
            }
        }
        return false;
    };

    // On the bisector, both the cell interior and its complement are nearby.
    report.boundary = scan(
        [&](double f) { return std::abs(f) <= tol; },
        [&](int ix, int iy) {
            return neighborhood_has(ix, iy, 2, [&](double f) { return f > tol; }) &&
                   neighborhood_has(ix, iy, 2, [&](double f) { return f < -tol; });
        });

    // Strictly inside the cell means locally surrounded by the cell.
    report.interior = scan(
        [&](double f) { return f < -report.interior_threshold; },
        [&](int ix, int iy) {
            return !neighborhood_has(ix, iy, 1, [&](double f) { return !(f < 0.0); });
        });

    // The cell is the closure of its interior: weak membership has strict
    // membership nearby.
    report.closure = scan(
        [&](double f) { return f <= tol; },
        [&](int ix, int iy) {
            return neighborhood_has(ix, iy, 2, [&](double f) { return f < -tol; });
        });

    return report;
}

std::string render_boundary_report(const BoundaryCheckReport& report) {
    std::ostringstream out;
    if (!report.applicable) {
        out << "general position: VIOLATED (" << report.gp.violations.size()
            << " parallel site pair" << (report.gp.violations.size() == 1 ? "" : "s")
            << "); boundary statements not applicable\n";
        for (const auto& v : report.gp.violations) {
            out << "  sites " << (v.j + 1) << " and " << (v.k + 1) << ": segment ("
                << format_double(v.pj.x) << ", " << format_double(v.pj.y) << ") -> ("
                << format_double(v.pk.x) << ", " << format_double(v.pk.y)
                << ") is parallel to sphere direction (" << format_double(v.sphere_dir.x)
                << ", " << format_double(v.sphere_dir.y) << ")\n";
        }
        return out.str();
    }

    out << "general position: holds (margin " << format_double(report.gp.margin) << ")\n";
    out << "resolution " << report.resolution << ", tol " << format_double(report.tol)
        << ", interior threshold " << format_double(report.interior_threshold)
        << " (tol lifted to twice the largest 8-neighbor gauge step)\n";

    auto line = [&](const char* name, const BoundaryCheckStatement& stmt) {
        out << name << (stmt.pass ? "PASS" : "FAIL") << "  checked " << stmt.checked;
        if (!stmt.pass) {
            out << "  failures " << stmt.failures;
            if (stmt.counterexample) {
                out << "  first at (" << format_double(stmt.counterexample->x) << ", "
                    << format_double(stmt.counterexample->y) << ")";
            }
        }
        out << '\n';
    };
    line("boundary:  ", report.boundary);
    line("interior:  ", report.interior);
    line("closure:   ", report.closure);
    out << "overall: " << (report.all_pass() ? "PASS" : "FAIL") << '\n';
    return out.str();
}

}  // namespace nvlab
