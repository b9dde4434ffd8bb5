// End-to-end CLI behavior through run_cli: output formats, file outputs and
// the 0/2/3 exit code contract.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "nvlab/cli.hpp"
#include "nvlab/scene.hpp"
#include "nvlab/stability.hpp"
#include "nvlab/util.hpp"

using namespace nvlab;

namespace {

struct CliResult {
    int code = 0;
    std::string out;
    std::string err;
};

CliResult run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

TEST_CASE("no subcommand and unknown subcommands are input errors") {
    CHECK(run({}).code == kExitInputError);
    CHECK(run({"frobnicate"}).code == kExitInputError);
    const CliResult help = run({"--help"});
    CHECK(help.code == kExitOk);
    CHECK(help.out.find("check-gp") != std::string::npos);
    CHECK(help.out.find("sweep") != std::string::npos);
}

TEST_CASE("check-gp: exit 0 with margin, exit 3 with violation lines") {
    const CliResult good = run({"check-gp", "--scene", "builtin:ex62(1)"});
    CHECK(good.code == kExitOk);
    CHECK(good.out.find("holds (margin 1)") != std::string::npos);

    const CliResult fat = run({"check-gp", "--scene", "builtin:fat-l1"});
    CHECK(fat.code == kExitVerificationFailure);
    CHECK(fat.out.find("violated: 1 parallel pair") != std::string::npos);
    CHECK(fat.out.find("1 2 (-1,-1) (1,1) dir(0.5,0.5)") != std::string::npos);

    const CliResult big = run({"check-gp", "--scene", "builtin:ex61"});
    CHECK(big.code == kExitVerificationFailure);
    CHECK(big.out.find("violated: 54 parallel pairs") != std::string::npos);
}

TEST_CASE("scene resolution failures are input errors") {
    const CliResult missing = run({"check-gp", "--scene", "/nonexistent/path.scene"});
    CHECK(missing.code == kExitInputError);
    CHECK(missing.err.find("error:") != std::string::npos);

    const std::string bad = temp_path("nvlab_bad_scene.txt");
    std::ofstream(bad) << "[world]\nbox = 0 0 1\nnorm = l1\n";
    const CliResult malformed = run({"check-gp", "--scene", bad});
    CHECK(malformed.code == kExitInputError);
    CHECK(malformed.err.find("line 2") != std::string::npos);
    std::remove(bad.c_str());

    CHECK(run({"check-gp", "--scene", "builtin:nope"}).code == kExitInputError);
}

TEST_CASE("a scene file on disk round trips through the CLI") {
    const std::string path = temp_path("nvlab_disk_scene.txt");
    std::ofstream(path) << serialize_scene(builtin_scene("ex62(1)"));
    const CliResult r = run({"check-gp", "--scene", path});
    CHECK(r.code == kExitOk);
    CHECK(r.out.find("holds") != std::string::npos);
    std::remove(path.c_str());
}

TEST_CASE("cells: CSV rays for every site, parameter validation") {
    const CliResult r =
        run({"cells", "--scene", "builtin:ex62(1)", "--n-dirs", "64", "--tol", "1e-7"});
    CHECK(r.code == kExitOk);
    CHECK(r.out.rfind("k,px,py,theta_x,theta_y,T\n", 0) == 0);
    CHECK(r.out.find("\n1,0,1,") != std::string::npos);
    CHECK(r.out.find("\n2,0,-1,") != std::string::npos);

    CHECK(run({"cells", "--scene", "builtin:ex62(1)", "--n-dirs", "2"}).code ==
          kExitInputError);
    CHECK(run({"cells", "--scene", "builtin:ex62(1)", "--tol", "-1"}).code ==
          kExitInputError);

    const std::string out_file = temp_path("nvlab_cells.csv");
    const CliResult to_file = run(
        {"cells", "--scene", "builtin:ex62(1)", "--n-dirs", "64", "--out", out_file});
    CHECK(to_file.code == kExitOk);
    std::ifstream in(out_file);
    std::string header;
    std::getline(in, header);
    CHECK(header == "k,px,py,theta_x,theta_y,T");
    in.close();
    std::remove(out_file.c_str());
}

TEST_CASE("bisector: thin scene stays on y = 0; site index is validated") {
    const CliResult r = run(
        {"bisector", "--scene", "builtin:ex62(1)", "--site", "1", "--resolution", "64"});
    CHECK(r.code == kExitOk);
    std::istringstream lines(r.out);
    std::string line;
    std::getline(lines, line);
    CHECK(line == "x,y");
    int rows = 0;
    while (std::getline(lines, line)) {
        const auto comma = line.find(',');
        REQUIRE(comma != std::string::npos);
        CHECK(std::abs(std::stod(line.substr(comma + 1))) <= 1e-6);
        ++rows;
    }
    CHECK(rows > 30);

    CHECK(run({"bisector", "--scene", "builtin:ex62(1)", "--site", "3"}).code ==
          kExitInputError);
    CHECK(run({"bisector", "--scene", "builtin:ex62(1)", "--site", "0"}).code ==
          kExitInputError);
    CHECK(run({"bisector", "--scene", "builtin:ex62(1)"}).code == kExitInputError);
}

TEST_CASE("lambda: defaults epsilon to half the separation and reports a positive value") {
    const CliResult r = run(
        {"lambda", "--scene", "builtin:ex62(1)", "--site", "1", "--samples", "2000"});
    CHECK(r.code == kExitOk);
    CHECK(r.out.find("epsilon = 1\n") != std::string::npos);
    CHECK(r.out.find("lambda_tilde = ") != std::string::npos);
    CHECK(r.out.find("samples = ") != std::string::npos);
    const auto pos = r.out.find("lambda = ");
    REQUIRE(pos != std::string::npos);
    CHECK(std::stod(r.out.substr(pos + 9)) > 0.0);

    // epsilon above the separation bound: a verification-phase failure is
    // still malformed input from the CLI's point of view.
    CHECK(run({"lambda", "--scene", "builtin:ex62(1)", "--site", "1", "--epsilon", "5",
               "--samples", "100"})
              .code == kExitInputError);
}

TEST_CASE("sweep: trace CSV round trips and the verdict goes to stderr") {
    const CliResult r = run({"sweep", "--scene", "builtin:ex62(1)", "--deltas",
                             "0.5,0.05,0.005", "--trials", "2", "--n-dirs", "64",
                             "--density", "8", "--resolution", "64", "--classify"});
    CHECK(r.code == kExitOk);
    const StabilityTrace trace = trace_from_csv(r.out);
    CHECK(trace.rows.size() == 6);
    CHECK(trace.rows[0].delta == 0.5);
    CHECK(r.err.find("sufficient-delta bound: ") != std::string::npos);
    CHECK(r.err.find("verdict: stable") != std::string::npos);

    CHECK(run({"sweep", "--scene", "builtin:ex62(1)", "--deltas", "0.1,bad"}).code ==
          kExitInputError);
    CHECK(run({"sweep", "--scene", "builtin:ex62(1)", "--deltas", "0.1", "--trials", "0"})
              .code == kExitInputError);
    CHECK(run({"sweep", "--scene", "builtin:ex62(1)", "--deltas", "0.1", "--mode",
               "bogus"})
              .code == kExitInputError);
    CHECK(run({"sweep", "--scene", "builtin:ex62(1)", "--deltas", "0.1", "--mode",
               "paper"})
              .code == kExitInputError);
}

TEST_CASE("sweep: paper mode on the 20-site scene shows the constant offset") {
    const CliResult r = run({"sweep", "--scene", "builtin:ex61", "--mode", "paper",
                             "--deltas", "0.1", "--trials", "1", "--n-dirs", "128",
                             "--density", "8", "--resolution", "64"});
    CHECK(r.code == kExitOk);
    const StabilityTrace trace = trace_from_csv(r.out);
    REQUIRE(trace.rows.size() == 1);
    CHECK(trace.rows[0].max_cell_D > 3.0);
}

TEST_CASE("topology: pass on thin scene, fail with fat witness on the fat scene") {
    const CliResult good = run(
        {"topology", "--scene", "builtin:ex62(1)", "--resolution", "65"});
    CHECK(good.code == kExitOk);
    CHECK(good.out.find("site 1:") != std::string::npos);
    CHECK(good.out.find("site 2:") != std::string::npos);
    CHECK(good.out.find("PASS") != std::string::npos);
    CHECK(good.out.find("fat bisector: none") != std::string::npos);

    const CliResult fat = run(
        {"topology", "--scene", "builtin:fat-l1", "--resolution", "128"});
    CHECK(fat.code == kExitVerificationFailure);
    CHECK(fat.out.find("fat bisector: detected, witness (") != std::string::npos);

    CHECK(run({"topology", "--scene", "builtin:ex62(1)", "--site", "5"}).code ==
          kExitInputError);
}

TEST_CASE("render: a well-formed SVG document") {
    const std::string path = temp_path("nvlab_render.svg");
    const CliResult r = run({"render", "--scene", "builtin:ex62(1)", "--n-dirs", "64",
                             "--out", path});
    CHECK(r.code == kExitOk);
    std::ifstream in(path);
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string svg = buf.str();
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(svg.find("</svg>") != std::string::npos);
    CHECK(svg.find("<polygon") != std::string::npos);
    in.close();
    std::remove(path.c_str());
}

TEST_CASE("scenes: list and show") {
    const CliResult list = run({"scenes", "--list"});
    CHECK(list.code == kExitOk);
    CHECK(list.out.find("ex61\n") != std::string::npos);
    CHECK(list.out.find("gp10-linf(seed)") != std::string::npos);

    const CliResult show = run({"scenes", "--show", "ex62(1)"});
    CHECK(show.code == kExitOk);
    CHECK(load_scene(show.out) == builtin_scene("ex62(1)"));

    CHECK(run({"scenes", "--show", "nope"}).code == kExitInputError);
}
