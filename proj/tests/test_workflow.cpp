#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "porefill/bench.hpp"
#include "porefill/config.hpp"
#include "porefill/voxel_image.hpp"
#include "porefill/workflow.hpp"

using namespace porefill;
using namespace porefill::wf;
namespace fs = std::filesystem;

namespace {

std::string temp_dir(const std::string& stem) {
    static int counter = 0;
    auto dir = fs::temp_directory_path() / "porefill_wf_tests" /
               (stem + "_" + std::to_string(counter++));
    fs::remove_all(dir);  // resumability tests need genuinely fresh directories
    fs::create_directories(dir);
    return dir.string();
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream(path, std::ios::binary) << text;
}

// Sphere-pack smoke configuration, sized so the full pipeline completes in
// seconds while still exercising every stage.
std::string smoke_config(const std::string& out_dir) {
    return R"([structure]
generate = true
nx = 24
ny = 24
nz = 24
voxel_size = 1.0
radius_mean = 2.5
radius_sd = 0.4
porosity = 0.65
seed = 11

[fluids]
surface_tension = 0.05 0.072
contact_angle = 60
reference_sigma = 0.072
reference_theta = 60

[fill]
pressure_steps = 0.0 0.1 0.2 0.3
steps_per_level = 4000
convergence_tol = 1e-3

[units]
sigma_lat = 0.116
nu_phys = 1e-6

[output]
directory = )" + out_dir +
           "\nworkers = 1\n";
}

}  // namespace

TEST_CASE("config parser handles sections, comments and types") {
    const Config cfg = Config::from_string(R"(
# top comment
[alpha]
x = 1.5        # trailing comment
name = hello world
flag = true
seed = 12345678901
steps = 0.1 0.2 0.4
empty_list =

[beta]
count = 7
)");
    CHECK(cfg.has("alpha", "x"));
    CHECK(!cfg.has("alpha", "missing"));
    CHECK(cfg.get("alpha", "name", "") == "hello world");
    CHECK(cfg.get("gamma", "x", "fallback") == "fallback");
    CHECK(cfg.get_double("alpha", "x", 0.0) == 1.5);
    CHECK(cfg.get_double("alpha", "absent", 2.5) == 2.5);
    CHECK(cfg.get_int("beta", "count", 0) == 7);
    CHECK(cfg.get_u64("alpha", "seed", 0) == 12345678901ull);
    CHECK(cfg.get_bool("alpha", "flag", false));
    CHECK(cfg.get_list("alpha", "steps", {}) == std::vector<double>{0.1, 0.2, 0.4});
    CHECK(cfg.get_list("alpha", "empty_list", {1.0}).empty());
    CHECK(cfg.get_list("alpha", "absent", {1.0}) == std::vector<double>{1.0});
    CHECK(cfg.require("beta", "count") == "7");
    CHECK_THROWS_AS(cfg.require("beta", "absent"), Error);
    CHECK_THROWS_AS(cfg.get_double("alpha", "name", 0.0), Error);
    CHECK_THROWS_AS(cfg.get_int("alpha", "x", 0), Error);
    CHECK_THROWS_AS(cfg.get_bool("beta", "count", false), Error);
}

TEST_CASE("config parser reports malformed lines") {
    CHECK_THROWS_AS(Config::from_string("[unclosed\nx = 1\n"), Error);
    CHECK_THROWS_AS(Config::from_string("[s]\nno equals sign\n"), Error);
    CHECK_THROWS_AS(Config::from_string("[s]\n= orphan value\n"), Error);
    try {
        Config::from_string("[ok]\nkey = 1\nbroken line\n");
        FAIL("expected CONFIG_ERROR");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::CONFIG_ERROR);
        CHECK(e.message().find("line 3") != std::string::npos);
    }
    CHECK_THROWS_AS(Config::load("/nonexistent/path/config.ini"), Error);
}

TEST_CASE("section hash tracks content, not declaration order") {
    const Config a = Config::from_string("[s]\nx = 1\ny = 2\n");
    const Config b = Config::from_string("[s]\ny = 2\nx = 1\n");
    const Config c = Config::from_string("[s]\nx = 1\ny = 3\n");
    CHECK(a.section_hash("s") == b.section_hash("s"));
    CHECK(a.section_hash("s") != c.section_hash("s"));
    CHECK(a.section_hash("missing") == b.section_hash("also_missing"));
}

TEST_CASE("workflow config validation") {
    Config base = Config::from_string(smoke_config(temp_dir("val")));

    SUBCASE("smoke config is valid") { CHECK_NOTHROW(parse_workflow_config(base)); }

    SUBCASE("structure source must be exactly one of generate/input") {
        base.set("structure", "input", "some.vxi");
        CHECK_THROWS_AS(parse_workflow_config(base), Error);
        base.set("structure", "generate", "false");
        CHECK_NOTHROW(parse_workflow_config(base));
    }

    SUBCASE("missing sigma_lat is rejected with a calibration hint") {
        Config cfg = Config::from_string(smoke_config(temp_dir("val")));
        cfg.set("units", "sigma_lat", "0");
        try {
            parse_workflow_config(cfg);
            FAIL("expected CONFIG_ERROR");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::CONFIG_ERROR);
            CHECK(e.message().find("calibrate") != std::string::npos);
        }
    }

    SUBCASE("contact angles outside (0, 90] are rejected") {
        base.set("fluids", "contact_angle", "60 95");
        CHECK_THROWS_AS(parse_workflow_config(base), Error);
        base.set("fluids", "contact_angle", "0");
        CHECK_THROWS_AS(parse_workflow_config(base), Error);
        base.set("fluids", "contact_angle", "");
        CHECK_THROWS_AS(parse_workflow_config(base), Error);
    }

    SUBCASE("tiny grids and bad porosity are rejected") {
        base.set("structure", "nx", "3");
        CHECK_THROWS_AS(parse_workflow_config(base), Error);
        base.set("structure", "nx", "20");
        base.set("structure", "porosity", "1.0");
        CHECK_THROWS_AS(parse_workflow_config(base), Error);
    }

    SUBCASE("inlet must differ from outlet") {
        base.set("fill", "inlet", "xmax");
        CHECK_THROWS_AS(parse_workflow_config(base), Error);
    }
}

TEST_CASE("manifest persists sorted key-value entries") {
    const std::string dir = temp_dir("manifest");
    Manifest m;
    m.entries["stage:structure"] = "00ff";
    m.entries["artifact:structure.vxi"] = "abcd";
    m.entries["artifact:pores.csv"] = "1234";
    const std::string path = dir + "/manifest.txt";
    m.save(path);

    const Manifest back = Manifest::load(path);
    CHECK(back.entries == m.entries);
    CHECK(back.artifacts() == std::vector<std::string>{"pores.csv", "structure.vxi"});
    CHECK(Manifest::load(dir + "/missing.txt").entries.empty());

    const std::string text = read_file(path);
    CHECK(text.find("artifact:pores.csv=1234\n") != std::string::npos);
    CHECK(text.find("artifact:pores.csv") < text.find("stage:structure"));
}

TEST_CASE("bench runs the gate before reporting timings") {
    SUBCASE("single worker row") {
        const auto res = bench_scaling({8, 8, 8}, 10, {1});
        REQUIRE(res.rows.size() == 1);
        CHECK(res.rows[0].workers == 1);
        CHECK(res.rows[0].steps == 10);
        CHECK(res.rows[0].wall_seconds > 0.0);
        CHECK(res.rows[0].mlups > 0.0);
        CHECK(res.rows[0].speedup == doctest::Approx(1.0));
        CHECK(res.rows[0].efficiency == doctest::Approx(1.0));
        CHECK(res.state_hash != 0);
    }

    SUBCASE("worker counts agree bit-for-bit") {
        const auto res = bench_scaling({8, 8, 8}, 12, {1, 2, 3});
        REQUIRE(res.rows.size() == 3);
        const auto solo = bench_scaling({8, 8, 8}, 12, {1});
        CHECK(res.state_hash == solo.state_hash);
    }

    SUBCASE("tampered state withholds every timing") {
        try {
            bench_scaling({8, 8, 8}, 10, {1, 2},
                          [](lbm::Lattice& lat, std::size_t run) {
                              if (run == 1) lat.set_density(0, 4, 4, 4, 0.123);
                          });
            FAIL("expected RESULT_MISMATCH");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::RESULT_MISMATCH);
            CHECK(e.message().find("withheld") != std::string::npos);
        }
    }

    SUBCASE("argument validation") {
        CHECK_THROWS_AS(bench_scaling({2, 8, 8}, 10, {1}), Error);
        CHECK_THROWS_AS(bench_scaling({8, 8, 8}, 0, {1}), Error);
        CHECK_THROWS_AS(bench_scaling({8, 8, 8}, 10, {}), Error);
        CHECK_THROWS_AS(bench_scaling({8, 8, 8}, 10, {1, 0}), Error);
    }

    SUBCASE("csv layout") {
        const auto res = bench_scaling({8, 8, 8}, 5, {1});
        const std::string path = temp_dir("bench") + "/bench.csv";
        write_bench_csv(res, path);
        std::ifstream in(path);
        std::string line;
        std::getline(in, line);
        CHECK(line == "workers,nx,ny,nz,steps,wall_seconds,mlups,speedup,efficiency");
        std::getline(in, line);
        CHECK(line.rfind("1,8,8,8,5,", 0) == 0);
        CHECK(!std::getline(in, line));
    }
}

TEST_CASE("plot emission mirrors the artifact directory") {
    const std::string dir = temp_dir("plots");
    CHECK_THROWS_AS(emit_plots(dir + "/nonexistent"), Error);
    try {
        emit_plots(dir);
        FAIL("expected MISSING_ARTIFACT for an empty directory");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::MISSING_ARTIFACT);
    }

    write_file(dir + "/lbm_curve.csv", "pressure_pa,saturation\n100,0.5\n");
    write_file(dir + "/pnm_s0_t0.csv", "pressure_pa,saturation\n90,0.4\n");
    write_file(dir + "/pnm_s0_t1.csv", "pressure_pa,saturation\n95,0.6\n");

    const auto written = emit_plots(dir);
    REQUIRE(written.size() == 1);
    const std::string overlay = read_file(written[0]);
    CHECK(overlay.find("lbm_curve.csv") != std::string::npos);
    CHECK(overlay.find("pnm_s0_t0.csv") != std::string::npos);
    CHECK(overlay.find("pnm_s0_t1.csv") != std::string::npos);

    const auto again = emit_plots(dir);
    CHECK(read_file(again[0]) == overlay);

    write_file(dir + "/bench.csv",
               "workers,nx,ny,nz,steps,wall_seconds,mlups,speedup,efficiency\n"
               "1,64,64,64,100,1.0,5.5,1.0,1.0\n");
    const auto with_bench = emit_plots(dir);
    CHECK(with_bench.size() == 2);
    const std::string scaling = read_file(dir + "/scaling.gp");
    CHECK(scaling.find("bench.csv") != std::string::npos);
}

TEST_CASE("workflow pipeline runs, resumes and partially reruns") {
    const std::string out = temp_dir("pipeline");
    const Config cfg = Config::from_string(smoke_config(out));

    const auto first = run_workflow(cfg);
    const std::vector<std::string> all_stages{"structure", "classify", "extract", "fill",
                                              "units",     "calibrate", "sweep",  "transport"};
    CHECK(first.stages_run == all_stages);
    for (const char* name :
         {"structure.vxi", "classified.vxi", "pores.csv", "throats.csv",
          "network_stats.txt", "lbm_curve_lattice.csv", "filled.vxi", "state.lbc",
          "gas_analysis.txt", "units.txt", "lbm_curve.csv", "pnm_reference.csv",
          "calibration.txt", "sweep_index.csv", "pnm_s0_t0.csv", "pnm_s1_t0.csv",
          "transport.txt", "feedback.csv"}) {
        CAPTURE(name);
        CHECK(fs::exists(fs::path(out) / name));
    }
    CHECK(fs::exists(first.manifest_path));
    const std::string manifest_bytes = read_file(first.manifest_path);

    SUBCASE("identical rerun skips every stage and keeps the manifest") {
        const auto second = run_workflow(cfg);
        CHECK(second.stages_run.empty());
        CHECK(read_file(second.manifest_path) == manifest_bytes);
        CHECK(second.artifacts == first.artifacts);
    }

    SUBCASE("sweep-only parameter change reruns only downstream stages") {
        Config changed = Config::from_string(smoke_config(out));
        changed.set("fluids", "surface_tension", "0.05 0.072 0.09");
        const auto second = run_workflow(changed);
        const std::set<std::string> ran(second.stages_run.begin(), second.stages_run.end());
        CHECK(ran.count("calibrate"));
        CHECK(ran.count("sweep"));
        CHECK(!ran.count("structure"));
        CHECK(!ran.count("classify"));
        CHECK(!ran.count("extract"));
        CHECK(!ran.count("fill"));
        CHECK(fs::exists(fs::path(out) / "pnm_s2_t0.csv"));
    }

    SUBCASE("a deleted artifact forces its producing stage to rerun") {
        fs::remove(fs::path(out) / "pnm_reference.csv");
        const auto second = run_workflow(cfg);
        const std::set<std::string> ran(second.stages_run.begin(), second.stages_run.end());
        CHECK(ran.count("calibrate"));
        CHECK(!ran.count("fill"));
    }
}

#ifdef POREFILL_CLI
TEST_CASE("command line entry point maps errors to exit codes") {
    const std::string dir = temp_dir("cli");
    const std::string cli = POREFILL_CLI;
    auto run = [&](const std::string& args) {
        const std::string cmd = cli + " " + args + " > /dev/null 2>&1";
        const int status = std::system(cmd.c_str());
        return WEXITSTATUS(status);
    };

    CHECK(run("") == 2);                       // missing subcommand
    CHECK(run("--help") == 0);
    CHECK(run("generate --config " + dir + "/absent.ini") == 2);
    CHECK(run("extract --input " + dir + "/absent.vxi --out " + dir) == 3);

    write_file(dir + "/gen.ini", R"([structure]
generate = true
nx = 12
ny = 12
nz = 12
radius_mean = 3
porosity = 0.6
)");
    CHECK(run("generate --config " + dir + "/gen.ini --out " + dir) == 0);
    CHECK(fs::exists(dir + "/structure.vxi"));
    CHECK(run("classify --input " + dir + "/structure.vxi --out " + dir) == 0);
    CHECK(run("extract --input " + dir + "/classified.vxi --out " + dir) == 0);
    CHECK(fs::exists(dir + "/pores.csv"));
    CHECK(fs::exists(dir + "/throats.csv"));

    write_file(dir + "/blowup.ini", R"([fill]
pressure_steps = 1e8
steps_per_level = 1000
)");
    CHECK(run("fill --config " + dir + "/blowup.ini --input " + dir +
              "/classified.vxi --out " + dir) == 4);

    write_file(dir + "/bench.ini", R"([bench]
dims = 8 8 8
steps = 5
workers = 1
)");
    CHECK(run("bench --config " + dir + "/bench.ini --out " + dir) == 0);
    CHECK(fs::exists(dir + "/bench.csv"));
    CHECK(run("plot --out " + dir) == 0);
    CHECK(fs::exists(dir + "/scaling.gp"));
}
#endif
