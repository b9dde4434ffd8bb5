// Perturbation sweeps: how far do cells and bisectors move when sites move
// by less than delta? Includes the builtin scene catalog with the two
// counterexample configurations.
#ifndef NVLAB_STABILITY_HPP
#define NVLAB_STABILITY_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nvlab/scene.hpp"
#include "nvlab/voronoi.hpp"

namespace nvlab {

// Catalog: ex61, ex62(beta), fat-l1, fat-linf, gp10-linf(seed), shops-l1(seed).
// Bare ex62 means beta=1; bare gp10-linf / shops-l1 mean seed=1.
Scene builtin_scene(const std::string& name);

std::vector<std::string> builtin_scene_names();

enum class PerturbMode { Random, Paper };

struct SweepParams {
    int n_dirs = 1024;
    double tol = 1e-7;
    int density = 32;         // cell cloud points per unit length
    int bisector_resolution = 256;
};

struct StabilityRow {
    double delta = 0.0;
    int trial = 0;
    std::uint64_t seed = 0;
    double max_cell_D = 0.0;
    double max_bisector_D = 0.0;
};

struct StabilityTrace {
    std::string label;
    std::vector<StabilityRow> rows;  // sorted by delta descending
    // Sufficient perturbation bound from the lambda machinery (recorded for
    // comparison with the empirically sufficient delta); absent when the
    // scene is not in general position.
    std::optional<double> epsilon4_bound;
    std::vector<std::pair<double, int>> skipped;  // (delta, trial) with eta collapse
};

// For each delta (descending) and trial: perturb, recompute every cell and
// bisector, and record the max Hausdorff movement. Deterministic: the trial
// seed is derived from (seed, delta, trial) only.
StabilityTrace stability_sweep(const Scene& scene, std::vector<double> deltas,
                               int trials, std::uint64_t seed, PerturbMode mode,
                               const SweepParams& params = {});

std::string trace_to_csv(const StabilityTrace& trace);
StabilityTrace trace_from_csv(const std::string& text);

enum class StabilityVerdict { Stable, Unstable, Inconclusive };

std::string verdict_name(StabilityVerdict v);

// Trend classification over the tested range (never a claim about all
// perturbations): stable when the per-delta median of max_cell_D shrinks by
// at least shrink_factor per decade overall and ends below floor; unstable
// when every median stays at or above floor. floor is absolute (callers
// default it to 0.1 x the box's max side). Requires >= 3 delta levels
// spanning >= 2 decades.
StabilityVerdict classify_stability(const StabilityTrace& trace, double shrink_factor,
                                    double floor);

}  // namespace nvlab

#endif
