#include "nvlab/scene.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <thread>

#include "nvlab/parallel.hpp"
#include "nvlab/util.hpp"

namespace nvlab {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return {};
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

std::vector<double> parse_numbers(const std::string& text, int line_no) {
    std::vector<double> out;
    std::istringstream in(text);
    std::string token;
    while (in >> token) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(token, &used));
            if (used != token.size()) throw std::invalid_argument(token);
        } catch (const std::exception&) {
            throw parse_error("line " + std::to_string(line_no) + ": not a number: '" +
                              token + "'");
        }
    }
    return out;
}

void validate_scene(const Scene& scene) {
    if (!(scene.box.lo.x < scene.box.hi.x) || !(scene.box.lo.y < scene.box.hi.y)) {
        throw validation_error("box is degenerate: lower corner must be strictly below "
                               "the upper corner on both axes");
    }
    if (scene.sites.size() < 2) {
        throw validation_error("a scene needs at least 2 sites, got " +
                               std::to_string(scene.sites.size()));
    }
    for (std::size_t k = 0; k < scene.sites.size(); ++k) {
        const auto& pts = scene.sites[k].points;
        if (pts.empty()) {
            throw validation_error("site " + std::to_string(k + 1) + " has no points");
        }
        for (const Vec2 p : pts) {
            if (!scene.box.contains(p)) {
                throw validation_error("site " + std::to_string(k + 1) + " point (" +
                                       format_double(p.x) + ", " + format_double(p.y) +
                                       ") lies outside the box");
            }
        }
    }
    for (std::size_t j = 0; j < scene.sites.size(); ++j) {
        for (std::size_t k = j + 1; k < scene.sites.size(); ++k) {
            for (const Vec2 p : scene.sites[j].points) {
                for (const Vec2 q : scene.sites[k].points) {
                    if (p == q) {
                        throw validation_error(
                            "sites " + std::to_string(j + 1) + " and " +
                            std::to_string(k + 1) + " share the point (" +
                            format_double(p.x) + ", " + format_double(p.y) + ")");
                    }
                }
            }
        }
    }
}

}  // namespace

Scene load_scene(const std::string& text) {
    enum class Section { None, World, Site, Meta };

    Scene scene;
    Section section = Section::None;
    bool have_box = false;
    std::string norm_name;
    std::vector<double> polytope_coords;
    bool have_vertices = false;

    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string line = trim(raw);
        if (line.empty() || line.front() == '#') continue;

        if (line.front() == '[') {
            if (line.back() != ']') {
                throw parse_error("line " + std::to_string(line_no) +
                                  ": unterminated section header");
            }
            const std::string header = trim(line.substr(1, line.size() - 2));
            if (header == "world") {
                section = Section::World;
            } else if (header == "meta") {
                section = Section::Meta;
            } else if (header.rfind("site", 0) == 0) {
                const std::string index_text = trim(header.substr(4));
                int index = 0;
                try {
                    std::size_t used = 0;
                    index = std::stoi(index_text, &used);
                    if (used != index_text.size()) throw std::invalid_argument(index_text);
                } catch (const std::exception&) {
                    throw parse_error("line " + std::to_string(line_no) +
                                      ": bad site header '[" + header + "]'");
                }
                if (index != static_cast<int>(scene.sites.size()) + 1) {
                    throw parse_error("line " + std::to_string(line_no) + ": site sections "
                                      "must be numbered consecutively from 1; expected [site " +
                                      std::to_string(scene.sites.size() + 1) + "]");
                }
                scene.sites.emplace_back();
                section = Section::Site;
            } else {
                throw parse_error("line " + std::to_string(line_no) +
                                  ": unknown section '[" + header + "]'");
            }
            continue;
        }

        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw parse_error("line " + std::to_string(line_no) +
                              ": expected 'key = value'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));

        switch (section) {
            case Section::None:
                throw parse_error("line " + std::to_string(line_no) +
                                  ": '" + key + "' appears before any section header");
            case Section::World: {
                if (key == "box") {
                    const auto nums = parse_numbers(value, line_no);
                    if (nums.size() != 4) {
                        throw parse_error("line " + std::to_string(line_no) +
                                          ": box needs 4 numbers (ax ay bx by)");
                    }
                    scene.box = {{nums[0], nums[1]}, {nums[2], nums[3]}};
                    have_box = true;
                } else if (key == "norm") {
                    norm_name = value;
                } else if (key == "vertices") {
                    const auto nums = parse_numbers(value, line_no);
                    if (nums.size() < 8 || nums.size() % 2 != 0) {
                        throw parse_error("line " + std::to_string(line_no) +
                                          ": vertices needs an even count >= 8 of numbers");
                    }
                    polytope_coords = nums;
                    have_vertices = true;
                } else {
                    throw parse_error("line " + std::to_string(line_no) +
                                      ": unknown world key '" + key + "'");
                }
                break;
            }
            case Section::Site: {
                if (key != "point") {
                    throw parse_error("line " + std::to_string(line_no) +
                                      ": unknown site key '" + key + "'");
                }
                const auto nums = parse_numbers(value, line_no);
                if (nums.size() != 2) {
                    throw parse_error("line " + std::to_string(line_no) +
                                      ": point needs 2 numbers (x y)");
                }
                scene.sites.back().points.push_back({nums[0], nums[1]});
                break;
            }
            case Section::Meta: {
                if (key != "label") {
                    throw parse_error("line " + std::to_string(line_no) +
                                      ": unknown meta key '" + key + "'");
                }
                scene.label = value;
                break;
            }
        }
    }

    if (!have_box) throw parse_error("missing 'box' in [world]");
    if (norm_name.empty()) throw parse_error("missing 'norm' in [world]");

    if (norm_name == "l1") {
        scene.norm = NormSpec::l1();
    } else if (norm_name == "l2") {
        scene.norm = NormSpec::l2();
    } else if (norm_name == "linf") {
        scene.norm = NormSpec::linf();
    } else if (norm_name == "polytope") {
        if (!have_vertices) throw parse_error("norm 'polytope' needs a 'vertices' line");
        std::vector<Vec2> verts;
        verts.reserve(polytope_coords.size() / 2);
        for (std::size_t i = 0; i < polytope_coords.size(); i += 2) {
            verts.push_back({polytope_coords[i], polytope_coords[i + 1]});
        }
        scene.norm = NormSpec::polytope(std::move(verts));
    } else {
        throw parse_error("unknown norm '" + norm_name +
                          "' (expected l1, l2, linf or polytope)");
    }
    if (have_vertices && scene.norm.kind != NormKind::Polytope) {
        throw parse_error("'vertices' is only valid with norm = polytope");
    }

    validate_scene(scene);
    return scene;
}

std::string serialize_scene(const Scene& scene) {
    std::ostringstream out;
    out << "[world]\n";
    out << "box = " << format_double(scene.box.lo.x) << ' ' << format_double(scene.box.lo.y)
        << ' ' << format_double(scene.box.hi.x) << ' ' << format_double(scene.box.hi.y)
        << '\n';
    out << "norm = " << norm_kind_name(scene.norm.kind) << '\n';
    if (scene.norm.kind == NormKind::Polytope) {
        out << "vertices =";
        for (const Vec2 v : scene.norm.vertices) {
            out << ' ' << format_double(v.x) << ' ' << format_double(v.y);
        }
        out << '\n';
    }
    for (std::size_t k = 0; k < scene.sites.size(); ++k) {
        out << "\n[site " << (k + 1) << "]\n";
        for (const Vec2 p : scene.sites[k].points) {
            out << "point = " << format_double(p.x) << ' ' << format_double(p.y) << '\n';
        }
    }
    if (!scene.label.empty()) {
        out << "\n[meta]\nlabel = " << scene.label << '\n';
    }
    return out.str();
}

bool operator==(const Scene& a, const Scene& b) {
    if (!(a.box == b.box) || !(a.norm == b.norm) || a.label != b.label) return false;
    if (a.sites.size() != b.sites.size()) return false;
    for (std::size_t k = 0; k < a.sites.size(); ++k) {
        if (a.sites[k].points != b.sites[k].points) return false;
    }
    return true;
}

SiteDistance site_distance(const Scene& scene, Vec2 x, int k) {
    if (k < 0 || k >= scene.site_count()) {
        throw validation_error("site index " + std::to_string(k) + " out of range");
    }
    const auto& pts = scene.sites[k].points;
    SiteDistance best{std::numeric_limits<double>::infinity(), pts.front(), 0};
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const double d = gauge(scene.norm, x - pts[i]);
        if (d < best.dist) best = {d, pts[i], static_cast<int>(i)};
    }
    return best;
}

double competitor_distance(const Scene& scene, Vec2 x, int k) {
    if (k < 0 || k >= scene.site_count()) {
        throw validation_error("site index " + std::to_string(k) + " out of range");
    }
    double best = std::numeric_limits<double>::infinity();
    for (int j = 0; j < scene.site_count(); ++j) {
        if (j == k) continue;
        for (const Vec2 p : scene.sites[j].points) {
            best = std::min(best, gauge(scene.norm, x - p));
        }
    }
    return best;
}

double signed_clearance(const Scene& scene, Vec2 x, int k) {
    return site_distance(scene, x, k).dist - competitor_distance(scene, x, k);
}

// ---- exact finite-set Hausdorff, uniform-grid accelerated ----------------

namespace {

// Bucketed point set supporting exact gauge nearest-neighbor queries. The
// ring search is pruned through c_low * |v|_2 <= gauge(v), so results equal
// the brute-force scan.
class PointGrid {
  public:
    PointGrid(const NormSpec& norm, std::span<const Vec2> pts)
        : norm_(&norm), pts_(pts), c_low_(gauge_euclidean_bounds(norm).c_low) {
        lo_ = hi_ = pts.front();
        for (const Vec2 p : pts) {
            lo_ = {std::min(lo_.x, p.x), std::min(lo_.y, p.y)};
            hi_ = {std::max(hi_.x, p.x), std::max(hi_.y, p.y)};
        }
        const double extent = std::max(hi_.x - lo_.x, hi_.y - lo_.y);
        const double target = extent / std::max(1.0, std::sqrt(static_cast<double>(pts.size())));
        h_ = std::max(target, extent > 0.0 ? extent * 1e-9 : 1.0);
        if (h_ <= 0.0) h_ = 1.0;
        nx_ = std::max(1, static_cast<int>((hi_.x - lo_.x) / h_) + 1);
        ny_ = std::max(1, static_cast<int>((hi_.y - lo_.y) / h_) + 1);
        buckets_.resize(static_cast<std::size_t>(nx_) * ny_);
        for (std::size_t i = 0; i < pts.size(); ++i) {
            buckets_[bucket_of(pts[i])].push_back(static_cast<int>(i));
        }
    }

    struct NN {
        double dist = std::numeric_limits<double>::infinity();
        int index = -1;
    };

    NN nearest(Vec2 q) const {
        NN best;
        scan(q, [&](double d, int idx) {
            if (d < best.dist || (d == best.dist && idx < best.index)) best = {d, idx};
            return false;  // keep searching until rings are exhausted
        }, [&](double ring_lb_gauge) { return ring_lb_gauge > best.dist; });
        return best;
    }

    // True iff some point is strictly closer than limit.
    bool any_below(Vec2 q, double limit) const {
        bool found = false;
        scan(q, [&](double d, int) {
            if (d < limit) {
                found = true;
                return true;
            }
            return false;
        }, [&](double ring_lb_gauge) { return ring_lb_gauge >= limit; });
        return found;
    }

  private:
    std::size_t bucket_of(Vec2 p) const {
        int ix = static_cast<int>((p.x - lo_.x) / h_);
        int iy = static_cast<int>((p.y - lo_.y) / h_);
        ix = std::clamp(ix, 0, nx_ - 1);
        iy = std::clamp(iy, 0, ny_ - 1);
        return static_cast<std::size_t>(iy) * nx_ + ix;
    }

    // Visits buckets ring by ring around q. visit(dist, index) returns true
    // to stop; done(ring_lower_bound_in_gauge) decides when no farther ring
    // can matter. The bound (r-1)*h on a ring-r bucket holds for any q, even
    // outside the grid's bounding box.
    template <typename Visit, typename Done>
    void scan(Vec2 q, Visit visit, Done done) const {
        const int cx = std::clamp(static_cast<int>((q.x - lo_.x) / h_), 0, nx_ - 1);
        const int cy = std::clamp(static_cast<int>((q.y - lo_.y) / h_), 0, ny_ - 1);
        const int max_ring = std::max(nx_, ny_);

        auto visit_bucket = [&](int ix, int iy) {
            if (ix < 0 || ix >= nx_ || iy < 0 || iy >= ny_) return false;
            for (const int idx : buckets_[static_cast<std::size_t>(iy) * nx_ + ix]) {
                if (visit(gauge(*norm_, q - pts_[idx]), idx)) return true;
            }
            return false;
        };

        for (int r = 0; r <= max_ring; ++r) {
            const double ring_lb = c_low_ * std::max(0, r - 1) * h_;
            if (done(ring_lb)) return;
            if (r == 0) {
                if (visit_bucket(cx, cy)) return;
                continue;
            }
            for (int ix = cx - r; ix <= cx + r; ++ix) {
                if (visit_bucket(ix, cy - r)) return;
                if (visit_bucket(ix, cy + r)) return;
            }
            for (int iy = cy - r + 1; iy <= cy + r - 1; ++iy) {
                if (visit_bucket(cx - r, iy)) return;
                if (visit_bucket(cx + r, iy)) return;
            }
        }
    }

    const NormSpec* norm_;
    std::span<const Vec2> pts_;
    double c_low_;
    Vec2 lo_, hi_;
    double h_ = 1.0;
    int nx_ = 1, ny_ = 1;
    std::vector<std::vector<int>> buckets_;
};

struct Directed {
    double value = 0.0;
    int a_index = -1;
    int b_index = -1;
};

// sup_{a in A} d(a, B), exact. Queries provably below the running max are
// skipped; the skip test is strict, so the attaining query is never skipped.
Directed directed_hausdorff(const NormSpec& norm, std::span<const Vec2> a,
                            std::span<const Vec2> b) {
    const PointGrid grid(norm, b);
    const unsigned workers = worker_count();
    std::vector<Directed> partial(workers);
    std::atomic<double> shared_best{0.0};

    const std::size_t n = a.size();
    const std::size_t chunk = std::max<std::size_t>(1, n / (workers * 8) + 1);
    std::atomic<std::size_t> cursor{0};
    std::atomic<unsigned> worker_ids{0};

    auto body = [&] {
        const unsigned wid = worker_ids.fetch_add(1);
        Directed local;
        for (;;) {
            const std::size_t begin = cursor.fetch_add(chunk);
            if (begin >= n) break;
            const std::size_t end = std::min(begin + chunk, n);
            for (std::size_t i = begin; i < end; ++i) {
                const double floor = std::max(local.value, shared_best.load(std::memory_order_relaxed));
                if (local.a_index >= 0 && grid.any_below(a[i], floor)) continue;
                const auto nn = grid.nearest(a[i]);
                if (nn.dist > local.value || local.a_index < 0) {
                    local = {nn.dist, static_cast<int>(i), nn.index};
                    double seen = shared_best.load(std::memory_order_relaxed);
                    while (seen < local.value &&
                           !shared_best.compare_exchange_weak(seen, local.value)) {
                    }
                }
            }
        }
        partial[wid] = local;
    };

    if (workers <= 1 || n < 256) {
        Directed best;
        for (std::size_t i = 0; i < n; ++i) {
            if (best.a_index >= 0 && grid.any_below(a[i], best.value)) continue;
            const auto nn = grid.nearest(a[i]);
            if (nn.dist > best.value || best.a_index < 0) {
                best = {nn.dist, static_cast<int>(i), nn.index};
            }
        }
        return best;
    }

    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    for (unsigned t = 1; t < workers; ++t) pool.emplace_back(body);
    body();
    for (auto& th : pool) th.join();

    Directed best;
    for (const auto& p : partial) {
        if (p.a_index < 0) continue;
        if (best.a_index < 0 || p.value > best.value ||
            (p.value == best.value && p.a_index < best.a_index)) {
            best = p;
        }
    }
    return best;
}

}  // namespace

HausdorffReport hausdorff(const NormSpec& norm, std::span<const Vec2> a,
                          std::span<const Vec2> b) {
    HausdorffReport report;
    if (a.empty() && b.empty()) return report;  // D(empty, empty) = 0
    if (a.empty() || b.empty()) {
        report.infinite = true;
        report.value = std::numeric_limits<double>::infinity();
        return report;
    }
    const Directed ab = directed_hausdorff(norm, a, b);
    const Directed ba = directed_hausdorff(norm, b, a);
    report.witness_ab = {a[ab.a_index], b[ab.b_index]};
    report.witness_ba = {b[ba.a_index], a[ba.b_index]};
    report.value = std::max(ab.value, ba.value);
    return report;
}

double min_pairwise_site_distance(const Scene& scene) {
    double best = std::numeric_limits<double>::infinity();
    for (int j = 0; j < scene.site_count(); ++j) {
        for (int k = j + 1; k < scene.site_count(); ++k) {
            for (const Vec2 p : scene.sites[j].points) {
                for (const Vec2 q : scene.sites[k].points) {
                    best = std::min(best, gauge(scene.norm, p - q));
                }
            }
        }
    }
    return best;
}

Scene perturb_scene(const Scene& scene, double delta, std::uint64_t seed) {
    if (!(delta > 0.0)) throw validation_error("perturbation delta must be positive");
    Scene out = scene;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * 3.14159265358979323846);
    std::uniform_real_distribution<double> radius(0.0, 1.0);
    for (auto& site : out.sites) {
        for (auto& p : site.points) {
            const double a = angle(rng);
            const double u = radius(rng);
            const Vec2 dir{std::cos(a), std::sin(a)};
            const double g = gauge(scene.norm, dir);
            Vec2 moved = scene.box.clamp(p + (delta * u / g) * dir);
            // Componentwise clamping preserves the displacement gauge for the
            // lp norms; for a polytope ball it might not, so scale back onto
            // the segment [p, moved] (inside the box by convexity) if needed.
            const double got = gauge(scene.norm, moved - p);
            if (got > delta * u && got > 0.0) {
                moved = p + (delta * u / got) * (moved - p);
            }
            p = moved;
        }
    }
    return out;
}

Scene perturb_scene_paper(const Scene& scene, double beta) {
    if (scene.label.rfind("ex61", 0) != 0) {
        throw validation_error("the paper perturbation mode is specific to the ex61 "
                               "configuration (scene label must start with 'ex61')");
    }
    if (!(beta > 0.0) || !(beta < 2.0)) {
        throw validation_error("paper-mode beta must lie in (0, 2)");
    }
    static const Vec2 centers[4] = {{-4, -4}, {4, -4}, {-4, 4}, {4, 4}};
    Scene out = scene;
    for (auto& site : out.sites) {
        for (auto& p : site.points) {
            Vec2 center = centers[0];
            double best = gauge(scene.norm, p - centers[0]);
            for (const Vec2 c : centers) {
                const double d = gauge(scene.norm, p - c);
                if (d < best) {
                    best = d;
                    center = c;
                }
            }
            if (p == center) continue;  // group centers stay put
            if (p.x < center.x) {
                p.x += beta;
            } else if (p.x > center.x) {
                p.x -= beta;
            }
        }
    }
    return out;
}

}  // namespace nvlab
