#include "nvlab/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "nvlab/general_position.hpp"
#include "nvlab/util.hpp"

namespace nvlab {

namespace {

Scene point_sites_scene(Box box, NormSpec norm, std::vector<Vec2> points,
                        std::string label) {
    Scene scene;
    scene.box = box;
    scene.norm = std::move(norm);
    for (const Vec2 p : points) scene.sites.push_back({{p}});
    scene.label = std::move(label);
    return scene;
}

// "name(arg)" -> {"name", arg}; plain names pass through with no arg.
std::pair<std::string, std::optional<std::string>> split_builtin_name(
    const std::string& name) {
    const auto open = name.find('(');
    if (open == std::string::npos) return {name, std::nullopt};
    if (name.back() != ')') {
        throw validation_error("malformed scene name '" + name + "'");
    }
    return {name.substr(0, open), name.substr(open + 1, name.size() - open - 2)};
}

double parse_positive_real(const std::string& text, const std::string& name) {
    double v = 0.0;
    try {
        std::size_t used = 0;
        v = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
    } catch (const std::exception&) {
        throw validation_error("bad parameter '" + text + "' in scene name '" + name + "'");
    }
    return v;
}

std::uint64_t parse_seed(const std::string& text, const std::string& name) {
    try {
        std::size_t used = 0;
        const unsigned long long v = std::stoull(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw validation_error("bad seed '" + text + "' in scene name '" + name + "'");
    }
}

Scene random_gp_scene(NormSpec norm, std::uint64_t seed, std::string label) {
    const Box box{{0, 0}, {10, 10}};
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> coord(0.0, 10.0);
    for (int attempt = 0; attempt < 1000; ++attempt) {
        std::vector<Vec2> points;
        points.reserve(10);
        for (int i = 0; i < 10; ++i) points.push_back({coord(rng), coord(rng)});
        Scene scene = point_sites_scene(box, norm, points, label);
        if (!(min_pairwise_site_distance(scene) > 0.0)) continue;
        if (check_general_position(scene).holds) return scene;
    }
    throw validation_error("no general-position draw found for '" + label +
                           "' after 1000 attempts");
}

}  // namespace

Scene builtin_scene(const std::string& name) {
    const auto [head, arg] = split_builtin_name(name);
    const Box big{{-10, -10}, {10, 10}};

    if (head == "ex61") {
        if (arg) throw validation_error("ex61 takes no parameter");
        const Vec2 group[5] = {{-6, -6}, {-2, -6}, {-6, -2}, {-2, -2}, {-4, -4}};
        const Vec2 shifts[4] = {{0, 0}, {8, 0}, {0, 8}, {8, 8}};
        std::vector<Vec2> points;
        for (const Vec2 s : shifts) {
            for (const Vec2 g : group) points.push_back(g + s);
        }
        return point_sites_scene(big, NormSpec::l1(), points, "ex61");
    }
    if (head == "ex62") {
        const double beta = arg ? parse_positive_real(*arg, name) : 1.0;
        if (!(beta > 0.0) || !(beta < 10.0)) {
            throw validation_error("ex62 beta must lie in (0, 10)");
        }
        return point_sites_scene(big, NormSpec::l1(), {{0, beta}, {0, -beta}},
                                 "ex62(" + format_double(beta) + ")");
    }
    if (head == "fat-l1") {
        if (arg) throw validation_error("fat-l1 takes no parameter");
        return point_sites_scene(big, NormSpec::l1(), {{-1, -1}, {1, 1}}, "fat-l1");
    }
    if (head == "fat-linf") {
        if (arg) throw validation_error("fat-linf takes no parameter");
        return point_sites_scene(big, NormSpec::linf(), {{0, 1}, {0, -1}}, "fat-linf");
    }
    if (head == "gp10-linf") {
        const std::uint64_t seed = arg ? parse_seed(*arg, name) : 1;
        return random_gp_scene(NormSpec::linf(), seed,
                               "gp10-linf(" + std::to_string(seed) + ")");
    }
    if (head == "shops-l1") {
        const std::uint64_t seed = arg ? parse_seed(*arg, name) : 1;
        return random_gp_scene(NormSpec::l1(), seed,
                               "shops-l1(" + std::to_string(seed) + ")");
    }
    throw validation_error("unknown builtin scene '" + name + "'; available: ex61, "
                           "ex62(beta), fat-l1, fat-linf, gp10-linf(seed), shops-l1(seed)");
}

std::vector<std::string> builtin_scene_names() {
    return {"ex61", "ex62(beta)", "fat-l1", "fat-linf", "gp10-linf(seed)",
            "shops-l1(seed)"};
}

namespace {

// Upper bound for the largest distance from a box point to a site: for each
// site, any single member point works, and the gauge is maximized at a box
// corner by convexity.
double coverage_radius_bound(const Scene& scene) {
    const Vec2 corners[4] = {scene.box.lo,
                             {scene.box.hi.x, scene.box.lo.y},
                             {scene.box.lo.x, scene.box.hi.y},
                             scene.box.hi};
    double worst = 0.0;
    for (const auto& site : scene.sites) {
        double site_bound = std::numeric_limits<double>::infinity();
        for (const Vec2 p : site.points) {
            double reach = 0.0;
            for (const Vec2 c : corners) reach = std::max(reach, gauge(scene.norm, c - p));
            site_bound = std::min(site_bound, reach);
        }
        worst = std::max(worst, site_bound);
    }
    return worst;
}

// The sufficient site-perturbation bound derived from the uniform penetration
// constant: perturbations below lambda / (8 (1 + M/eps)) keep every cell
// within eps. Recorded for comparison against the empirical sweep.
std::optional<double> sufficient_delta_bound(const Scene& scene) {
    if (!check_general_position(scene).holds) return std::nullopt;
    const double eta = min_pairwise_site_distance(scene);
    if (!(eta > 0.0)) return std::nullopt;
    const double eps = eta / 6.0;
    const double m = coverage_radius_bound(scene);
    double lambda = std::numeric_limits<double>::infinity();
    for (int k = 0; k < scene.site_count(); ++k) {
        lambda = std::min(lambda, estimate_lambda(scene, k, eps, 20000, 1).lambda);
    }
    if (!(lambda > 0.0)) return std::nullopt;
    return lambda / (8.0 * (1.0 + m / eps));
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

StabilityTrace stability_sweep(const Scene& scene, std::vector<double> deltas,
                               int trials, std::uint64_t seed, PerturbMode mode,
                               const SweepParams& params) {
    if (deltas.empty()) throw validation_error("sweep needs at least one delta");
    for (const double d : deltas) {
        if (!(d >= 0.0)) throw validation_error("sweep deltas must be nonnegative");
    }
    if (trials < 1) throw validation_error("sweep needs at least one trial");
    std::sort(deltas.begin(), deltas.end(), std::greater<>());

    StabilityTrace trace;
    trace.label = scene.label;
    trace.epsilon4_bound = sufficient_delta_bound(scene);

    const Diagram base = compute_diagram(scene, params.n_dirs, params.tol);
    std::vector<BisectorSample> base_bis;
    for (int k = 0; k < scene.site_count(); ++k) {
        base_bis.push_back(extract_bisector(scene, k, params.bisector_resolution));
    }

    for (const double delta : deltas) {
        for (int trial = 0; trial < trials; ++trial) {
            const std::uint64_t tseed = trial_seed(seed, delta, trial);
            Scene pert;
            if (delta == 0.0) {
                pert = scene;  // degenerate sweep level: identity perturbation
            } else if (mode == PerturbMode::Paper) {
                pert = perturb_scene_paper(scene, delta);
            } else {
                pert = perturb_scene(scene, delta, tseed);
            }
            if (!(min_pairwise_site_distance(pert) > 0.0)) {
                trace.skipped.push_back({delta, trial});
                continue;
            }
            const Diagram moved = compute_diagram(pert, params.n_dirs, params.tol);

            StabilityRow row;
            row.delta = delta;
            row.trial = trial;
            row.seed = tseed;
            for (int k = 0; k < scene.site_count(); ++k) {
                row.max_cell_D = std::max(
                    row.max_cell_D,
                    cell_hausdorff(scene.norm, base.cells[k], moved.cells[k], params.density)
                        .value);
                const BisectorSample moved_bis =
                    extract_bisector(pert, k, params.bisector_resolution);
                row.max_bisector_D = std::max(
                    row.max_bisector_D,
                    hausdorff(scene.norm, base_bis[k].points, moved_bis.points).value);
            }
            trace.rows.push_back(row);
        }
    }
    return trace;
}

std::string trace_to_csv(const StabilityTrace& trace) {
    std::ostringstream out;
    out << "delta,trial,seed,max_cell_D,max_bisector_D\n";
    for (const auto& row : trace.rows) {
        out << format_double(row.delta) << ',' << row.trial << ',' << row.seed << ','
            << format_double(row.max_cell_D) << ',' << format_double(row.max_bisector_D)
            << '\n';
    }
    return out.str();
}

StabilityTrace trace_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != "delta,trial,seed,max_cell_D,max_bisector_D") {
        throw parse_error("bad trace header; expected "
                          "'delta,trial,seed,max_cell_D,max_bisector_D'");
    }
    StabilityTrace trace;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::istringstream row_in(line);
        std::string field;
        std::vector<std::string> fields;
        while (std::getline(row_in, field, ',')) fields.push_back(field);
        if (fields.size() != 5) {
            throw parse_error("line " + std::to_string(line_no) +
                              ": expected 5 comma-separated fields");
        }
        try {
            StabilityRow row;
            std::size_t used = 0;
            row.delta = std::stod(fields[0], &used);
            row.trial = std::stoi(fields[1]);
            row.seed = std::stoull(fields[2]);
            row.max_cell_D = std::stod(fields[3]);
            row.max_bisector_D = std::stod(fields[4]);
            trace.rows.push_back(row);
        } catch (const std::exception&) {
            throw parse_error("line " + std::to_string(line_no) + ": malformed row '" +
                              line + "'");
        }
    }
    std::stable_sort(trace.rows.begin(), trace.rows.end(),
                     [](const StabilityRow& a, const StabilityRow& b) {
                         if (a.delta != b.delta) return a.delta > b.delta;
                         return a.trial < b.trial;
                     });
    return trace;
}

std::string verdict_name(StabilityVerdict v) {
    switch (v) {
        case StabilityVerdict::Stable: return "stable";
        case StabilityVerdict::Unstable: return "unstable";
        case StabilityVerdict::Inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

StabilityVerdict classify_stability(const StabilityTrace& trace, double shrink_factor,
                                    double floor) {
    if (!(shrink_factor > 1.0)) {
        throw validation_error("shrink factor must be greater than 1");
    }
    if (!(floor > 0.0)) throw validation_error("floor must be positive");

    std::vector<double> levels;
    std::vector<double> medians;
    for (std::size_t i = 0; i < trace.rows.size();) {
        const double delta = trace.rows[i].delta;
        std::vector<double> values;
        while (i < trace.rows.size() && trace.rows[i].delta == delta) {
            values.push_back(trace.rows[i].max_cell_D);
            ++i;
        }
        levels.push_back(delta);
        medians.push_back(median(std::move(values)));
    }
    if (levels.size() < 3) {
        throw validation_error("classification needs at least 3 delta levels");
    }
    if (!std::is_sorted(levels.rbegin(), levels.rend())) {
        throw validation_error("trace rows must be sorted by descending delta");
    }
    const double span = levels.front() / levels.back();
    if (!(span >= 100.0)) {
        throw validation_error("delta levels must span at least 2 orders of magnitude");
    }

    const double decades = std::log10(span);
    const double first = medians.front();
    const double last = medians.back();
    const bool ends_low = last < floor;
    const bool shrinks =
        first == 0.0 ? true : last <= first / std::pow(shrink_factor, decades);
    if (shrinks && ends_low) return StabilityVerdict::Stable;

    bool all_high = true;
    for (const double m : medians) {
        if (m < floor) {
            all_high = false;
            break;
        }
    }
    if (all_high) return StabilityVerdict::Unstable;
    return StabilityVerdict::Inconclusive;
}

}  // namespace nvlab
