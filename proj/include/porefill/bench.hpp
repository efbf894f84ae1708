// Strong-scaling benchmark for the lattice solver and gnuplot script
// emission for the standard artifact directory.

#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "porefill/lattice.hpp"

namespace porefill::wf {

struct BenchRow {
    int workers = 1;
    int nx = 0, ny = 0, nz = 0;
    int steps = 0;
    double wall_seconds = 0.0;
    double mlups = 0.0;       // million lattice-site updates per second
    double speedup = 1.0;     // vs the 1-worker row
    double efficiency = 1.0;  // speedup / worker ratio
};

struct BenchResult {
    std::vector<BenchRow> rows;
    std::uint64_t state_hash = 0;  // shared final-state hash (the physics gate)
};

// Runs the identical seeded two-component workload once per worker count on a
// fully periodic box: 50 warm-up steps, then `steps` timed steps excluding
// all setup and I/O. Final-state hashes must agree across worker counts;
// on disagreement no timings are reported and RESULT_MISMATCH is thrown.
// `tamper`, if set, runs after each timed run (test seam for the gate).
BenchResult bench_scaling(const std::array<int, 3>& dims, int steps,
                          const std::vector<int>& workers,
                          const std::function<void(lbm::Lattice&, std::size_t)>& tamper = {});

void write_bench_csv(const BenchResult& result, const std::string& path);

// Writes ps_overlay.gp (and scaling.gp when bench.csv is present) into the
// artifact directory; scripts reference the CSVs by relative path. Returns
// the script paths written. Byte-identical for identical directory contents.
std::vector<std::string> emit_plots(const std::string& artifact_dir);

}  // namespace porefill::wf
