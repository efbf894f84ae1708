#include <cmath>
#include <cstdio>

#include "porefill/connected_components.hpp"
#include "porefill/lattice.hpp"
#include "porefill/transport.hpp"

namespace porefill::lbm {

using voxelgrid::connected_components;
using voxelgrid::is_solid;
using voxelgrid::Label;
using voxelgrid::LabelField;
using voxelgrid::LabelSet;

FillResult fill_simulation(Lattice& lattice, const FillProtocol& protocol, int workers,
                           bool verbose) {
    protocol.validate();

    FillResult result;
    const int first_level = lattice.level_index() + 1;
    for (size_t level = static_cast<size_t>(first_level);
         level < protocol.pressure_steps.size(); ++level) {
        const double offset = protocol.pressure_steps[level];
        lattice.set_inlet_offset(offset);
        lattice.set_level_index(static_cast<int>(level));

        double sat = lattice.saturation();
        int used = 0;
        while (used < protocol.steps_per_level) {
            const int chunk = std::min(1000, protocol.steps_per_level - used);
            lattice.run_steps(chunk, workers);
            used += chunk;
            try {
                lattice.check_health();
            } catch (const Error& e) {
                throw Error(ErrorCode::NUMERIC_BLOWUP,
                            std::string(e.what()) + " (pressure step " +
                                std::to_string(level) + ")");
            }
            const double next = lattice.saturation();
            const double rel = std::abs(next - sat) / std::max(next, 1e-9);
            sat = next;
            if (chunk == 1000 && rel < protocol.convergence_tol) break;
        }

        result.curve.points.push_back({offset, sat});
        result.steps_per_level.push_back(used);
        if (verbose)
            std::fprintf(stderr, "level %zu: offset %.6g, saturation %.4f, %d steps\n",
                         level, offset, sat, used);
    }
    return result;
}

GasAnalysis residual_gas_analysis(const VoxelImage& filled, Face inlet) {
    GasAnalysis analysis;

    int64_t open_cells = 0, electrolyte = 0;
    for (uint8_t lab : filled.labels) {
        if (!is_solid(lab)) ++open_cells;
        if (lab == Label::ELECTROLYTE) ++electrolyte;
    }
    analysis.final_saturation =
        open_cells > 0 ? static_cast<double>(electrolyte) / static_cast<double>(open_cells)
                       : 0.0;

    const LabelField gas = connected_components(filled, LabelSet{Label::GAS}, 26);
    analysis.cluster_count = gas.count;
    analysis.clusters.resize(static_cast<size_t>(gas.count));
    const auto sizes = gas.region_sizes();  // indexed 1..count
    for (int i = 0; i < gas.count; ++i)
        analysis.clusters[static_cast<size_t>(i)].voxels = sizes[static_cast<size_t>(i) + 1];
    for (int z = 0; z < filled.nz; ++z)
        for (int y = 0; y < filled.ny; ++y)
            for (int x = 0; x < filled.nx; ++x) {
                if (!filled.on_face(x, y, z, inlet)) continue;
                const int32_t id = gas.ids[filled.index(x, y, z)];
                if (id > 0) analysis.clusters[static_cast<size_t>(id - 1)].touches_inlet = true;
            }

    analysis.wetted_solid_fraction = transport::wetted_solid_fraction(filled);
    return analysis;
}

GasAnalysis residual_gas_analysis(const Lattice& lattice) {
    return residual_gas_analysis(lattice.to_image(), lattice.inlet_face());
}

}  // namespace porefill::lbm
