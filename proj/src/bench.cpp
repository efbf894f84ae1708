#include "porefill/bench.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <random>

#include "porefill/voxel_image.hpp"

namespace fs = std::filesystem;

namespace porefill::wf {

using voxelgrid::VoxelImage;

namespace {

// One seeded workload shared by every worker count: spinodal decomposition of
// a perturbed 50:50 mixture, dynamics sensitive enough that any ordering or
// race difference shows up in the state hash.
lbm::Lattice make_bench_lattice(const std::array<int, 3>& dims) {
    const VoxelImage img(dims[0], dims[1], dims[2], 1.0, voxelgrid::PORE);
    lbm::ShanChenParams params;
    lbm::LatticeOptions options;
    options.periodic = {true, true, true};
    lbm::Lattice lattice(img, params, options);

    std::mt19937_64 rng(0x9e3779b97f4a7c15ULL);
    for (int z = 0; z < dims[2]; ++z) {
        for (int y = 0; y < dims[1]; ++y) {
            for (int x = 0; x < dims[0]; ++x) {
                const double a = 0.5 + 0.04 * (uniform01(rng) - 0.5);
                const double b = 0.5 + 0.04 * (uniform01(rng) - 0.5);
                lattice.set_density(0, x, y, z, a);
                lattice.set_density(1, x, y, z, b);
            }
        }
    }
    return lattice;
}

}  // namespace

BenchResult bench_scaling(const std::array<int, 3>& dims, int steps,
                          const std::vector<int>& workers,
                          const std::function<void(lbm::Lattice&, std::size_t)>& tamper) {
    if (dims[0] < 4 || dims[1] < 4 || dims[2] < 4) {
        throw Error(ErrorCode::CONFIG_ERROR, "bench domain must be at least 4^3");
    }
    if (steps < 1) throw Error(ErrorCode::CONFIG_ERROR, "bench steps must be >= 1");
    if (workers.empty()) throw Error(ErrorCode::CONFIG_ERROR, "bench worker list is empty");
    for (int w : workers) {
        if (w < 1) throw Error(ErrorCode::CONFIG_ERROR, "bench worker counts must be >= 1");
    }

    struct Timing {
        int workers;
        double wall;
        std::uint64_t hash;
    };
    std::vector<Timing> timings;
    for (std::size_t i = 0; i < workers.size(); ++i) {
        lbm::Lattice lattice = make_bench_lattice(dims);
        lattice.run_steps(50, workers[i]);
        const auto t0 = std::chrono::steady_clock::now();
        lattice.run_steps(steps, workers[i]);
        const auto t1 = std::chrono::steady_clock::now();
        if (tamper) tamper(lattice, i);
        timings.push_back({workers[i], std::chrono::duration<double>(t1 - t0).count(),
                           lattice.state_hash()});
    }

    for (const auto& t : timings) {
        if (t.hash != timings.front().hash) {
            throw Error(ErrorCode::RESULT_MISMATCH,
                        "final-state hash differs between " +
                            std::to_string(timings.front().workers) + " and " +
                            std::to_string(t.workers) + " workers (" +
                            hex64(timings.front().hash) + " vs " + hex64(t.hash) +
                            "); timings withheld");
        }
    }

    double base_wall = timings.front().wall;
    int base_workers = timings.front().workers;
    for (const auto& t : timings) {
        if (t.workers == 1) {
            base_wall = t.wall;
            base_workers = 1;
            break;
        }
    }

    const double sites = static_cast<double>(dims[0]) * dims[1] * dims[2];
    BenchResult result;
    result.state_hash = timings.front().hash;
    for (const auto& t : timings) {
        BenchRow row;
        row.workers = t.workers;
        row.nx = dims[0];
        row.ny = dims[1];
        row.nz = dims[2];
        row.steps = steps;
        row.wall_seconds = t.wall;
        row.mlups = sites * steps / t.wall / 1e6;
        row.speedup = base_wall / t.wall;
        row.efficiency = row.speedup * base_workers / t.workers;
        result.rows.push_back(row);
    }
    return result;
}

void write_bench_csv(const BenchResult& result, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::IO_ERROR, "cannot write " + path);
    out << "workers,nx,ny,nz,steps,wall_seconds,mlups,speedup,efficiency\n";
    for (const auto& r : result.rows) {
        out << r.workers << "," << r.nx << "," << r.ny << "," << r.nz << "," << r.steps << ","
            << format_double(r.wall_seconds) << "," << format_double(r.mlups) << ","
            << format_double(r.speedup) << "," << format_double(r.efficiency) << "\n";
    }
    if (!out) throw Error(ErrorCode::IO_ERROR, "short write on " + path);
}

std::vector<std::string> emit_plots(const std::string& artifact_dir) {
    if (!fs::is_directory(artifact_dir)) {
        throw Error(ErrorCode::MISSING_ARTIFACT, "not a directory: " + artifact_dir);
    }
    const std::string dir = artifact_dir + "/";

    std::vector<std::string> curves;
    if (fs::exists(dir + "lbm_curve.csv")) curves.push_back("lbm_curve.csv");
    std::vector<std::string> pnm_files;
    for (const auto& entry : fs::directory_iterator(artifact_dir)) {
        const std::string name = entry.path().filename().string();
        if (name.rfind("pnm_", 0) == 0 && name.size() > 4 &&
            name.compare(name.size() - 4, 4, ".csv") == 0) {
            pnm_files.push_back(name);
        }
    }
    std::sort(pnm_files.begin(), pnm_files.end());
    curves.insert(curves.end(), pnm_files.begin(), pnm_files.end());
    const bool have_bench = fs::exists(dir + "bench.csv");
    if (curves.empty() && !have_bench) {
        throw Error(ErrorCode::MISSING_ARTIFACT,
                    "nothing to plot in " + artifact_dir +
                        ": no pressure-saturation curves, no bench.csv");
    }

    std::vector<std::string> written;
    if (!curves.empty()) {
        std::ofstream gp(dir + "ps_overlay.gp", std::ios::binary);
        if (!gp) throw Error(ErrorCode::IO_ERROR, "cannot write ps_overlay.gp");
        gp << "# pressure-saturation overlay: lattice reference as points, pore-network\n"
              "# staircases as steps. Run from this directory: gnuplot ps_overlay.gp\n"
              "set datafile separator ','\n"
              "set xlabel 'pressure [Pa]'\n"
              "set ylabel 'saturation [-]'\n"
              "set yrange [0:1.05]\n"
              "set key left top\n"
              "plot \\\n";
        for (std::size_t i = 0; i < curves.size(); ++i) {
            const bool lbm = curves[i] == "lbm_curve.csv";
            gp << "  '" << curves[i] << "' skip 1 using 1:2 with "
               << (lbm ? "points pt 7 title 'lattice reference'"
                       : ("steps title '" + curves[i].substr(0, curves[i].size() - 4) + "'"))
               << " noenhanced";
            gp << (i + 1 < curves.size() ? ", \\\n" : "\n");
        }
        if (!gp) throw Error(ErrorCode::IO_ERROR, "short write on ps_overlay.gp");
        written.push_back(dir + "ps_overlay.gp");
    }

    if (have_bench) {
        std::ofstream gp(dir + "scaling.gp", std::ios::binary);
        if (!gp) throw Error(ErrorCode::IO_ERROR, "cannot write scaling.gp");
        gp << "# strong-scaling speedup. Run from this directory: gnuplot scaling.gp\n"
              "set datafile separator ','\n"
              "set xlabel 'workers'\n"
              "set ylabel 'speedup'\n"
              "set key left top\n"
              "plot \\\n"
              "  'bench.csv' skip 1 using 1:8 with linespoints title 'measured', \\\n"
              "  x with lines dashtype 2 title 'ideal'\n";
        if (!gp) throw Error(ErrorCode::IO_ERROR, "short write on scaling.gp");
        written.push_back(dir + "scaling.gp");
    }
    return written;
}

}  // namespace porefill::wf
