// The general-position check: exact parallelism detection against sphere
// segment directions and the quantitative margin, with brute-force oracles
// for the frozen margin values.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "nvlab/general_position.hpp"
#include "nvlab/stability.hpp"

using namespace nvlab;

namespace {

Scene two_site_scene(NormSpec norm, Vec2 a, Vec2 b) {
    Scene s;
    s.box = {{-10, -10}, {10, 10}};
    s.norm = std::move(norm);
    s.sites = {Site{{a}}, Site{{b}}};
    return s;
}

// Oracle: the margin is the smallest gauge distance from any normalized
// inter-site pair direction to any sphere segment direction.
double brute_margin(const Scene& scene) {
    const DirectionSet sphere = sphere_directions(scene.norm);
    if (sphere.directions.empty()) return std::numeric_limits<double>::infinity();
    double margin = std::numeric_limits<double>::infinity();
    for (int j = 0; j < scene.site_count(); ++j) {
        for (int k = j + 1; k < scene.site_count(); ++k) {
            for (const Vec2 p : scene.sites[j].points) {
                for (const Vec2 q : scene.sites[k].points) {
                    const Vec2 u = gauge_normalize(scene.norm, p - q);
                    for (const Vec2 s : sphere.directions) {
                        margin = std::min(margin, gauge(scene.norm, u - s));
                        margin = std::min(margin, gauge(scene.norm, -u - s));
                    }
                }
            }
        }
    }
    return margin;
}

}  // namespace

TEST_CASE("pair_directions normalizes and closes under negation") {
    const NormSpec l1 = NormSpec::l1();
    const std::vector<Vec2> p = {{0, 0}};
    const std::vector<Vec2> a = {{2, 2}, {3, 0}};
    const DirectionSet d = pair_directions(l1, p, a);
    CHECK(d.exact);
    CHECK(d.directions.size() == 4);
    for (const Vec2 u : d.directions) {
        CHECK(gauge(l1, u) == doctest::Approx(1.0).epsilon(1e-12));
        bool has_negation = false;
        for (const Vec2 v : d.directions) has_negation = has_negation || v == -u;
        CHECK(has_negation);
    }
    CHECK(d.contains_parallel({1, 1}));
    CHECK(d.contains_parallel({-1, 0}));
    CHECK_FALSE(d.contains_parallel({1, 2}));
}

TEST_CASE("two fat configurations are detected with exact directions") {
    const GPReport r1 = check_general_position(builtin_scene("fat-l1"));
    CHECK_FALSE(r1.holds);
    REQUIRE(r1.violations.size() == 1);
    CHECK(r1.violations[0].j == 0);
    CHECK(r1.violations[0].k == 1);
    // The (-1,-1)->(1,1) segment is parallel to the l1 sphere edge +/-(.5,.5).
    const Vec2 dir1 = r1.violations[0].sphere_dir;
    CHECK((dir1 == Vec2{0.5, 0.5} || dir1 == Vec2{-0.5, -0.5}));
    CHECK(cross(r1.violations[0].pj - r1.violations[0].pk, dir1) == 0.0);

    const GPReport r2 = check_general_position(builtin_scene("fat-linf"));
    CHECK_FALSE(r2.holds);
    REQUIRE(r2.violations.size() == 1);
    const Vec2 dir2 = r2.violations[0].sphere_dir;
    CHECK((dir2 == Vec2{0, 1} || dir2 == Vec2{0, -1}));
}

TEST_CASE("the 20-site counterexample violates general position heavily") {
    const GPReport r = check_general_position(builtin_scene("ex61"));
    CHECK_FALSE(r.holds);
    // 54 distinct cross-site point pairs have a diagonal difference
    // (counted by brute force over all 190 pairs).
    CHECK(r.violations.size() == 54);
    for (const GPViolation& v : r.violations) {
        CHECK(v.j < v.k);
        // Every violating segment is diagonal, parallel to an l1 sphere edge.
        const Vec2 d = v.pj - v.pk;
        CHECK(std::abs(d.x) == std::abs(d.y));
    }
}

TEST_CASE("the thin two-site scene holds with margin 1") {
    const Scene s = builtin_scene("ex62(1)");
    const GPReport r = check_general_position(s);
    CHECK(r.holds);
    CHECK(r.violations.empty());
    // Pair direction (0,1): nearest sphere direction is (+-.5,.5), l1
    // distance |0-+.5| + |1-.5| = 1.
    CHECK(r.margin == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.margin == doctest::Approx(brute_margin(s)).epsilon(1e-12));
}

TEST_CASE("linf margin for the (0,0)/(3,1) pair is exactly one third") {
    const Scene s = two_site_scene(NormSpec::linf(), {0, 0}, {3, 1});
    const GPReport r = check_general_position(s);
    CHECK(r.holds);
    CHECK(std::abs(r.margin - 1.0 / 3.0) <= 1e-12);
    CHECK(r.margin == doctest::Approx(brute_margin(s)).epsilon(1e-12));
}

TEST_CASE("l2 scenes always hold with infinite margin") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> coord(-9.0, 9.0);
    for (int i = 0; i < 50; ++i) {
        const Vec2 a{coord(rng), coord(rng)};
        Vec2 b{coord(rng), coord(rng)};
        if (a == b) b = b + Vec2{0.5, 0};
        const GPReport r = check_general_position(two_site_scene(NormSpec::l2(), a, b));
        CHECK(r.holds);
        CHECK(std::isinf(r.margin));
    }
}

TEST_CASE("a diagonal pair under l1 violates at any distance") {
    for (double t : {0.001, 1.0, 7.5}) {
        const Scene s = two_site_scene(NormSpec::l1(), {0, 0}, {t, t});
        const GPReport r = check_general_position(s);
        CHECK_FALSE(r.holds);
        REQUIRE(r.violations.size() == 1);
    }
    // Nudging one endpoint restores general position with a small margin.
    const Scene s = two_site_scene(NormSpec::l1(), {0, 0}, {1.0, 1.0 + 1e-6});
    const GPReport r = check_general_position(s);
    CHECK(r.holds);
    CHECK(r.margin > 0.0);
    CHECK(r.margin < 1e-5);
}

TEST_CASE("multi-point sites contribute every cross pair") {
    Scene s;
    s.box = {{-10, -10}, {10, 10}};
    s.norm = NormSpec::linf();
    // Both axis-parallel cross pairs violate; the in-site pair (0,0)-(5,5)
    // never enters the check.
    s.sites = {Site{{{0, 0}, {5, 5}}}, Site{{{3, 0}, {5, 2}}}};
    const GPReport r = check_general_position(s);
    CHECK_FALSE(r.holds);
    CHECK(r.violations.size() == 2);

    const DirectionSet all = site_pair_directions(s);
    CHECK(all.directions.size() <= 8);  // 4 cross pairs, +/- each, deduplicated
    CHECK(all.contains_parallel({1, 0}));
}
