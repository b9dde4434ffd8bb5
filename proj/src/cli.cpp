#include "nvlab/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include "CLI11.hpp"
#include "nvlab/general_position.hpp"
#include "nvlab/render.hpp"
#include "nvlab/scene.hpp"
#include "nvlab/stability.hpp"
#include "nvlab/topology.hpp"
#include "nvlab/util.hpp"
#include "nvlab/voronoi.hpp"

namespace nvlab {

namespace {

// "builtin:NAME" resolves from the catalog, anything else is a file path.
Scene resolve_scene(const std::string& source) {
    if (source.rfind("builtin:", 0) == 0) {
        return builtin_scene(source.substr(8));
    }
    std::ifstream in(source, std::ios::binary);
    if (!in) throw parse_error("cannot open scene file '" + source + "'");
    std::ostringstream text;
    text << in.rdbuf();
    return load_scene(text.str());
}

// Empty path or "-" means standard output.
void write_output(const std::string& path, const std::string& content,
                  std::ostream& out) {
    if (path.empty() || path == "-") {
        out << content;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw parse_error("cannot open output file '" + path + "'");
    f << content;
    f.flush();
    if (!f) throw parse_error("failed writing output file '" + path + "'");
}

int resolve_site_index(const Scene& scene, int site_1based) {
    if (site_1based < 1 || site_1based > scene.site_count()) {
        throw validation_error("--site must lie in [1, " +
                               std::to_string(scene.site_count()) + "]");
    }
    return site_1based - 1;
}

std::string cells_csv(const Scene& scene, const Diagram& diagram) {
    (void)scene;
    std::ostringstream csv;
    csv << "k,px,py,theta_x,theta_y,T\n";
    for (const Cell& cell : diagram.cells) {
        for (const RayBundle& bundle : cell.bundles) {
            for (const Ray& ray : bundle.rays) {
                csv << (cell.k + 1) << ',' << format_double(bundle.p.x) << ','
                    << format_double(bundle.p.y) << ',' << format_double(ray.theta.x)
                    << ',' << format_double(ray.theta.y) << ',' << format_double(ray.T)
                    << '\n';
            }
        }
    }
    return csv.str();
}

}  // namespace

int run_cli(const std::vector<std::string>& argv) {
    return run_cli(argv, std::cout, std::cerr);
}

int run_cli(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Voronoi cells under polyhedral and euclidean norms: computation, "
                 "degeneracy checks, and perturbation experiments"};
    app.require_subcommand(1);

    std::string scene_source;
    std::string out_path;
    int n_dirs = 512;
    double tol = 1e-7;
    int site = 0;
    int resolution = 0;
    double epsilon = 0.0;
    long samples = 20000;
    std::uint64_t seed = 1;
    std::vector<double> deltas;
    int trials = 5;
    std::string mode = "random";
    int density = 32;
    int width = 800;
    bool overlay_bisector = false;
    bool do_classify = false;
    double shrink_factor = 2.0;
    double floor_value = 0.0;
    bool list_scenes = false;
    std::string show_scene;

    auto add_scene = [&](CLI::App* sub) {
        sub->add_option("--scene", scene_source, "scene file path or builtin:NAME")
            ->required();
    };

    CLI::App* gp = app.add_subcommand("check-gp", "check the general-position condition");
    add_scene(gp);

    CLI::App* cells = app.add_subcommand("cells", "compute all cells, dump rays as CSV");
    add_scene(cells);
    cells->add_option("--n-dirs", n_dirs, "ray directions per bundle");
    cells->add_option("--tol", tol, "ray bisection tolerance");
    cells->add_option("--out", out_path, "output path (default: stdout)");

    CLI::App* bisector = app.add_subcommand("bisector", "extract one site's bisector");
    add_scene(bisector);
    bisector->add_option("--site", site, "site number (1-based)")->required();
    bisector->add_option("--resolution", resolution, "scan grid resolution")
        ->default_val(256);
    bisector->add_option("--out", out_path, "output path (default: stdout)");

    CLI::App* lambda = app.add_subcommand("lambda", "estimate the penetration constant");
    add_scene(lambda);
    lambda->add_option("--site", site, "site number (1-based)")->required();
    CLI::Option* eps_opt =
        lambda->add_option("--epsilon", epsilon, "probe depth (default: d(P_k,A_k)/2)");
    lambda->add_option("--samples", samples, "sample count");
    lambda->add_option("--seed", seed, "random seed");

    CLI::App* sweep = app.add_subcommand("sweep", "perturbation sweep, trace as CSV");
    add_scene(sweep);
    sweep->add_option("--deltas", deltas, "perturbation radii, comma separated")
        ->required()
        ->delimiter(',');
    sweep->add_option("--trials", trials, "trials per delta");
    sweep->add_option("--seed", seed, "base random seed");
    sweep->add_option("--mode", mode, "random | paper")
        ->check(CLI::IsMember({"random", "paper"}));
    sweep->add_option("--n-dirs", n_dirs, "ray directions per bundle")->default_val(1024);
    sweep->add_option("--tol", tol, "ray bisection tolerance");
    sweep->add_option("--density", density, "cell cloud points per unit length");
    sweep->add_option("--resolution", resolution, "bisector scan resolution")
        ->default_val(256);
    sweep->add_option("--out", out_path, "trace CSV path (default: stdout)");
    sweep->add_flag("--classify", do_classify, "print a stability verdict to stderr");
    sweep->add_option("--shrink-factor", shrink_factor, "required shrink per decade");
    CLI::Option* floor_opt =
        sweep->add_option("--floor", floor_value, "verdict floor (default: 0.1 x box side)");

    CLI::App* topology = app.add_subcommand(
        "topology", "boundary/interior/closure checks and fat-bisector detection");
    add_scene(topology);
    topology->add_option("--site", site, "site number (1-based; default: all sites)");
    topology->add_option("--resolution", resolution, "grid resolution")->default_val(512);
    CLI::Option* tol_opt =
        topology->add_option("--tol", tol, "zero tolerance (default: 1e-9 x box diagonal)");

    CLI::App* render = app.add_subcommand("render", "render the diagram as SVG");
    add_scene(render);
    render->add_option("--n-dirs", n_dirs, "ray directions per bundle");
    render->add_option("--tol", tol, "ray bisection tolerance");
    render->add_option("--width", width, "image width in pixels");
    render->add_flag("--overlay-bisector", overlay_bisector, "overlay bisector points");
    render->add_option("--resolution", resolution, "bisector scan resolution")
        ->default_val(256);
    render->add_option("--out", out_path, "output path (default: stdout)");

    CLI::App* scenes = app.add_subcommand("scenes", "builtin scene catalog");
    scenes->add_flag("--list", list_scenes, "list builtin scene names");
    scenes->add_option("--show", show_scene, "print a builtin scene in file format");

    std::vector<std::string> args(argv);
    std::reverse(args.begin(), args.end());
    try {
        app.parse(std::move(args));
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitInputError;
    }

    try {
        if (gp->parsed()) {
            const Scene scene = resolve_scene(scene_source);
            const GPReport report = check_general_position(scene);
            if (report.holds) {
                out << "holds (margin " << format_double(report.margin) << ")\n";
                return kExitOk;
            }
            out << "violated: " << report.violations.size() << " parallel pair"
                << (report.violations.size() == 1 ? "" : "s") << '\n';
            for (const auto& v : report.violations) {
                out << (v.j + 1) << ' ' << (v.k + 1) << " (" << format_double(v.pj.x)
                    << ',' << format_double(v.pj.y) << ") (" << format_double(v.pk.x)
                    << ',' << format_double(v.pk.y) << ") dir(" << format_double(v.sphere_dir.x)
                    << ',' << format_double(v.sphere_dir.y) << ")\n";
            }
            return kExitVerificationFailure;
        }

        if (cells->parsed()) {
            const Scene scene = resolve_scene(scene_source);
            if (n_dirs < 4 || !(tol > 0.0)) {
                throw validation_error("--n-dirs must be >= 4 and --tol positive");
            }
            Diagram diagram;
            try {
                diagram = compute_diagram(scene, n_dirs, tol);
            } catch (const validation_error& e) {
                err << "error: " << e.what() << '\n';
                return kExitVerificationFailure;
            }
            write_output(out_path, cells_csv(scene, diagram), out);
            return kExitOk;
        }

        if (bisector->parsed()) {
            const Scene scene = resolve_scene(scene_source);
            const int k = resolve_site_index(scene, site);
            const BisectorSample sample = extract_bisector(scene, k, resolution);
            std::ostringstream csv;
            csv << "x,y\n";
            for (const Vec2 p : sample.points) {
                csv << format_double(p.x) << ',' << format_double(p.y) << '\n';
            }
            write_output(out_path, csv.str(), out);
            if (sample.empty_flag) err << "note: bisector is empty\n";
            return kExitOk;
        }

        if (lambda->parsed()) {
            const Scene scene = resolve_scene(scene_source);
            const int k = resolve_site_index(scene, site);
            if (eps_opt->count() == 0) {
                double separation = std::numeric_limits<double>::infinity();
                for (const Vec2 p : scene.sites[k].points) {
                    for (int j = 0; j < scene.site_count(); ++j) {
                        if (j == k) continue;
                        for (const Vec2 q : scene.sites[j].points) {
                            separation = std::min(separation, gauge(scene.norm, p - q));
                        }
                    }
                }
                epsilon = separation / 2.0;
            }
            const LambdaEstimate est = estimate_lambda(scene, k, epsilon, samples, seed);
            out << "epsilon = " << format_double(est.epsilon) << '\n';
            out << "lambda_tilde = " << format_double(est.lambda_tilde) << '\n';
            out << "lambda = " << format_double(est.lambda) << '\n';
            out << "samples = " << est.sample_count << '\n';
            return kExitOk;
        }

        if (sweep->parsed()) {
            const Scene scene = resolve_scene(scene_source);
            const PerturbMode pmode =
                mode == "paper" ? PerturbMode::Paper : PerturbMode::Random;
            if (pmode == PerturbMode::Paper && scene.label.rfind("ex61", 0) != 0) {
                throw validation_error("--mode paper applies only to the ex61 scene");
            }
            if (deltas.empty()) throw validation_error("--deltas must be nonempty");
            for (const double d : deltas) {
                if (!(d >= 0.0)) throw validation_error("--deltas must be nonnegative");
                if (pmode == PerturbMode::Paper && d != 0.0 && !(d > 0.0 && d < 2.0)) {
                    throw validation_error("paper-mode deltas must lie in (0, 2)");
                }
            }
            if (trials < 1) throw validation_error("--trials must be at least 1");
            if (n_dirs < 4 || !(tol > 0.0) || density < 1 || resolution < 2) {
                throw validation_error("sweep parameters out of range");
            }
            SweepParams params;
            params.n_dirs = n_dirs;
            params.tol = tol;
            params.density = density;
            params.bisector_resolution = resolution;
            StabilityTrace trace;
            try {
                trace = stability_sweep(scene, deltas, trials, seed, pmode, params);
            } catch (const validation_error& e) {
                err << "error: " << e.what() << '\n';
                return kExitVerificationFailure;
            }
            write_output(out_path, trace_to_csv(trace), out);
            if (trace.epsilon4_bound) {
                err << "sufficient-delta bound: " << format_double(*trace.epsilon4_bound)
                    << '\n';
            }
            for (const auto& [delta, trial] : trace.skipped) {
                err << "skipped delta " << format_double(delta) << " trial " << trial
                    << " (site separation collapsed)\n";
            }
            if (do_classify) {
                if (floor_opt->count() == 0) {
                    floor_value = 0.1 * scene.box.max_side();
                }
                err << "verdict: "
                    << verdict_name(classify_stability(trace, shrink_factor, floor_value))
                    << '\n';
            }
            return kExitOk;
        }

        if (topology->parsed()) {
            const Scene scene = resolve_scene(scene_source);
            std::vector<int> targets;
            if (site != 0) {
                targets.push_back(resolve_site_index(scene, site));
            } else {
                for (int k = 0; k < scene.site_count(); ++k) targets.push_back(k);
            }
            if (tol_opt->count() == 0) tol = default_topology_tol(scene.box);
            bool ok = true;
            for (const int k : targets) {
                const BoundaryCheckReport report =
                    boundary_bisector_check(scene, k, resolution, tol);
                out << "site " << (k + 1) << ":\n" << render_boundary_report(report);
                const GridField field = grid_classify(scene, k, resolution);
                const FatBisectorResult fat = fat_bisector_detect(field, tol);
                if (fat.fat) {
                    out << "fat bisector: detected, witness (" << format_double(fat.witness->x)
                        << ", " << format_double(fat.witness->y) << ")\n";
                } else {
                    out << "fat bisector: none\n";
                }
                out << '\n';
                if (!report.applicable || !report.all_pass() || fat.fat) ok = false;
            }
            return ok ? kExitOk : kExitVerificationFailure;
        }

        if (render->parsed()) {
            const Scene scene = resolve_scene(scene_source);
            if (n_dirs < 4 || !(tol > 0.0)) {
                throw validation_error("--n-dirs must be >= 4 and --tol positive");
            }
            Diagram diagram;
            try {
                diagram = compute_diagram(scene, n_dirs, tol);
            } catch (const validation_error& e) {
                err << "error: " << e.what() << '\n';
                return kExitVerificationFailure;
            }
            RenderStyle style;
            style.width = width;
            if (overlay_bisector) {
                for (int k = 0; k < scene.site_count(); ++k) {
                    const BisectorSample sample = extract_bisector(scene, k, resolution);
                    style.bisector_overlay.insert(style.bisector_overlay.end(),
                                                  sample.points.begin(),
                                                  sample.points.end());
                }
            }
            write_output(out_path, render_svg(diagram, style), out);
            return kExitOk;
        }

        if (scenes->parsed()) {
            if (!show_scene.empty()) {
                out << serialize_scene(builtin_scene(show_scene));
            } else {
                for (const auto& name : builtin_scene_names()) out << name << '\n';
            }
            return kExitOk;
        }
    } catch (const parse_error& e) {
        err << "error: " << e.what() << '\n';
        return kExitInputError;
    } catch (const validation_error& e) {
        err << "error: " << e.what() << '\n';
        return kExitInputError;
    }
    err << "error: no subcommand selected\n";
    return kExitInputError;
}

}  // namespace nvlab
