// The builtin scene catalog, sweep determinism and bookkeeping, trace CSV
// round trips and the trend classifier.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "nvlab/general_position.hpp"
#include "nvlab/stability.hpp"
#include "nvlab/util.hpp"

using namespace nvlab;

namespace {

StabilityTrace synthetic_trace(const std::vector<double>& deltas,
                               const std::vector<double>& medians) {
    StabilityTrace t;
    t.label = "synthetic";
    for (size_t i = 0; i < deltas.size(); ++i) {
        // Three trials per level with the given median in the middle.
        for (int trial = 0; trial < 3; ++trial) {
            StabilityRow row;
            row.delta = deltas[i];
            row.trial = trial;
            row.seed = trial_seed(1, deltas[i], trial);
            row.max_cell_D = medians[i] * (trial == 0 ? 0.5 : trial == 1 ? 1.0 : 2.0);
            row.max_bisector_D = row.max_cell_D;
            t.rows.push_back(row);
        }
    }
    return t;
}

}  // namespace

TEST_CASE("builtin scene catalog") {
    const std::vector<std::string> names = builtin_scene_names();
    CHECK(names.size() == 6);
    CHECK(std::find(names.begin(), names.end(), "ex61") != names.end());
    CHECK(std::find(names.begin(), names.end(), "gp10-linf(seed)") != names.end());

    const Scene big = builtin_scene("ex61");
    CHECK(big.site_count() == 20);
    CHECK(big.norm.kind == NormKind::L1);
    CHECK(big.box == Box{{-10, -10}, {10, 10}});
    for (const Site& site : big.sites) CHECK(site.points.size() == 1);
    CHECK(big.sites[4].points[0] == Vec2{-4, -4});
    CHECK(big.sites[19].points[0] == Vec2{4, 4});

    const Scene thin = builtin_scene("ex62(0.5)");
    CHECK(thin.sites[0].points[0] == Vec2{0, 0.5});
    CHECK(thin.sites[1].points[0] == Vec2{0, -0.5});
    CHECK(builtin_scene("ex62").sites[0].points[0] == Vec2{0, 1});

    CHECK(builtin_scene("fat-l1").norm.kind == NormKind::L1);
    CHECK(builtin_scene("fat-linf").norm.kind == NormKind::LInf);

    const Scene g1 = builtin_scene("gp10-linf(1)");
    CHECK(g1.site_count() == 10);
    CHECK(g1.norm.kind == NormKind::LInf);
    CHECK(check_general_position(g1).holds);
    for (const Site& site : g1.sites) {
        CHECK(Box{{0, 0}, {10, 10}}.contains(site.points[0]));
    }
    CHECK(builtin_scene("gp10-linf(1)") == builtin_scene("gp10-linf"));
    CHECK_FALSE(builtin_scene("gp10-linf(2)") == g1);

    const Scene shops = builtin_scene("shops-l1(3)");
    CHECK(shops.site_count() == 10);
    CHECK(shops.norm.kind == NormKind::L1);
    CHECK(check_general_position(shops).holds);

    CHECK_THROWS_AS(builtin_scene("nope"), validation_error);
    CHECK_THROWS_AS(builtin_scene("ex62(0)"), validation_error);
    CHECK_THROWS_AS(builtin_scene("ex62(11)"), validation_error);
    CHECK_THROWS_AS(builtin_scene("ex61(2)"), validation_error);
    CHECK_THROWS_AS(builtin_scene("ex62(x)"), validation_error);
}

TEST_CASE("trial seeds are deterministic and well separated") {
    CHECK(trial_seed(1, 0.5, 0) == trial_seed(1, 0.5, 0));
    CHECK(trial_seed(1, 0.5, 0) != trial_seed(1, 0.5, 1));
    CHECK(trial_seed(1, 0.5, 0) != trial_seed(1, 0.1, 0));
    CHECK(trial_seed(1, 0.5, 0) != trial_seed(2, 0.5, 0));
}

TEST_CASE("sweep on a small l2 scene: deterministic, shrinking, zero at delta 0") {
    Scene s;
    s.box = {{-10, -10}, {10, 10}};
    s.norm = NormSpec::l2();
    s.sites = {Site{{{-2, 0}}}, Site{{{2, 0}}}};
    s.label = "pair";

    SweepParams params;
    params.n_dirs = 128;
    params.tol = 1e-7;
    params.density = 8;
    params.bisector_resolution = 64;

    const std::vector<double> deltas = {0.4, 0.04, 0.004, 0.0};
    const StabilityTrace t1 = stability_sweep(s, deltas, 3, 9, PerturbMode::Random, params);
    const StabilityTrace t2 = stability_sweep(s, deltas, 3, 9, PerturbMode::Random, params);

    REQUIRE(t1.rows.size() == 12);
    CHECK(t1.skipped.empty());
    for (size_t i = 0; i < t1.rows.size(); ++i) {
        CHECK(t1.rows[i].max_cell_D == t2.rows[i].max_cell_D);
        CHECK(t1.rows[i].seed == t2.rows[i].seed);
    }
    // Rows ordered by descending delta, ascending trial.
    for (size_t i = 1; i < t1.rows.size(); ++i) {
        const bool ordered = t1.rows[i - 1].delta > t1.rows[i].delta ||
                             (t1.rows[i - 1].delta == t1.rows[i].delta &&
                              t1.rows[i - 1].trial < t1.rows[i].trial);
        CHECK(ordered);
    }

    auto level_median = [&](double delta) {
        std::vector<double> v;
        for (const StabilityRow& r : t1.rows) {
            if (r.delta == delta) v.push_back(r.max_cell_D);
        }
        std::sort(v.begin(), v.end());
        return v[v.size() / 2];
    };
    // Cell movement tracks the perturbation size; with a strictly convex
    // norm the response is stable, so medians shrink with delta.
    CHECK(level_median(0.4) < 2.0);
    CHECK(level_median(0.004) < level_median(0.4));
    // Identity perturbation: cells and bisectors are recomputed from the
    // same scene, so every distance is exactly zero.
    CHECK(level_median(0.0) == 0.0);

    // The scene is in general position (l2), so the sufficient-delta bound
    // from the penetration constant is available and positive.
    REQUIRE(t1.epsilon4_bound.has_value());
    CHECK(*t1.epsilon4_bound > 0.0);

    CHECK_THROWS_AS(stability_sweep(s, {}, 3, 1, PerturbMode::Random, params),
                    validation_error);
    CHECK_THROWS_AS(stability_sweep(s, {0.1, -0.5}, 3, 1, PerturbMode::Random, params),
                    validation_error);
    CHECK_THROWS_AS(stability_sweep(s, {0.1}, 0, 1, PerturbMode::Random, params),
                    validation_error);
}

TEST_CASE("paper-mode sweep is deterministic and requires the 20-site scene") {
    const Scene big = builtin_scene("ex61");
    SweepParams params;
    params.n_dirs = 256;
    params.density = 8;
    params.bisector_resolution = 64;

    const StabilityTrace t =
        stability_sweep(big, {0.1}, 2, 1, PerturbMode::Paper, params);
    REQUIRE(t.rows.size() == 2);
    // The paper perturbation ignores the trial seed: both trials identical.
    CHECK(t.rows[0].max_cell_D == t.rows[1].max_cell_D);
    // Knife rays of the four center cells vanish: movement stays around 4
    // no matter how small beta is.
    CHECK(t.rows[0].max_cell_D > 3.0);
    // Not in general position: no lambda-based bound.
    CHECK_FALSE(t.epsilon4_bound.has_value());

    const Scene thin = builtin_scene("ex62(1)");
    CHECK_THROWS_AS(stability_sweep(thin, {0.1}, 1, 1, PerturbMode::Paper, params),
                    validation_error);
}

TEST_CASE("trials that collapse the site separation are skipped") {
    // A box much smaller than delta clamps every perturbed point onto the
    // boundary; sooner or later both sites land on the same corner.
    Scene tiny;
    tiny.box = {{0, 0}, {1e-9, 1e-9}};
    tiny.norm = NormSpec::l2();
    tiny.sites = {Site{{{0, 0}}}, Site{{{1e-9, 1e-9}}}};
    tiny.label = "tiny";

    std::uint64_t base = 0;
    bool found = false;
    for (std::uint64_t cand = 1; cand <= 200 && !found; ++cand) {
        const Scene pert = perturb_scene(tiny, 0.5, trial_seed(cand, 0.5, 0));
        if (!(min_pairwise_site_distance(pert) > 0.0)) {
            base = cand;
            found = true;
        }
    }
    REQUIRE(found);

    SweepParams params;
    params.n_dirs = 64;
    params.density = 8;
    params.bisector_resolution = 64;
    const StabilityTrace t =
        stability_sweep(tiny, {0.5}, 1, base, PerturbMode::Random, params);
    CHECK(t.rows.empty());
    REQUIRE(t.skipped.size() == 1);
    CHECK(t.skipped[0].first == 0.5);
    CHECK(t.skipped[0].second == 0);
}

TEST_CASE("trace CSV round trip") {
    StabilityTrace t = synthetic_trace({1.0, 0.1, 0.01}, {0.4, 0.05, 0.004});
    t.epsilon4_bound = 1.25e-6;
    t.skipped.push_back({0.1, 2});

    const std::string csv = trace_to_csv(t);
    const StabilityTrace back = trace_from_csv(csv);
    REQUIRE(back.rows.size() == t.rows.size());
    for (size_t i = 0; i < t.rows.size(); ++i) {
        CHECK(back.rows[i].delta == t.rows[i].delta);
        CHECK(back.rows[i].trial == t.rows[i].trial);
        CHECK(back.rows[i].seed == t.rows[i].seed);
        CHECK(back.rows[i].max_cell_D == t.rows[i].max_cell_D);
        CHECK(back.rows[i].max_bisector_D == t.rows[i].max_bisector_D);
    }

    CHECK_THROWS_AS(trace_from_csv("delta,trial\n1,2\n"), parse_error);
    CHECK_THROWS_AS(trace_from_csv(trace_to_csv(t) + "1,0,5\n"), parse_error);
}

TEST_CASE("trend classification") {
    const double floor = 0.1;

    const StabilityTrace stable =
        synthetic_trace({1.0, 0.1, 0.01}, {0.5, 0.05, 0.005});
    CHECK(classify_stability(stable, 2.0, floor) == StabilityVerdict::Stable);

    const StabilityTrace unstable =
        synthetic_trace({1.0, 0.1, 0.01}, {2.0, 2.1, 1.9});
    CHECK(classify_stability(unstable, 2.0, floor) == StabilityVerdict::Unstable);

    // Shrinks overall but never drops below the floor: over the tested
    // range the movement stayed macroscopic at every level.
    const StabilityTrace high_floor =
        synthetic_trace({1.0, 0.1, 0.01}, {2.0, 0.5, 0.2});
    CHECK(classify_stability(high_floor, 2.0, floor) == StabilityVerdict::Unstable);

    // Dips below the floor in the middle without a clean shrink trend.
    const StabilityTrace mixed =
        synthetic_trace({1.0, 0.1, 0.01}, {0.5, 0.05, 0.4});
    CHECK(classify_stability(mixed, 2.0, floor) == StabilityVerdict::Inconclusive);

    CHECK(verdict_name(StabilityVerdict::Stable) == "stable");
    CHECK(verdict_name(StabilityVerdict::Unstable) == "unstable");
    CHECK(verdict_name(StabilityVerdict::Inconclusive) == "inconclusive");

    // Structural requirements.
    CHECK_THROWS_AS(classify_stability(synthetic_trace({1.0, 0.1}, {0.5, 0.05}), 2.0, floor),
                    validation_error);
    CHECK_THROWS_AS(
        classify_stability(synthetic_trace({1.0, 0.5, 0.3}, {0.5, 0.4, 0.3}), 2.0, floor),
        validation_error);
    CHECK_THROWS_AS(classify_stability(stable, 1.0, floor), validation_error);
    CHECK_THROWS_AS(classify_stability(stable, 2.0, 0.0), validation_error);
}
