// Two-component Shan-Chen lattice Boltzmann solver on D3Q19 with an indexed
// active-cell layout: only fluid and reservoir voxels carry distributions,
// solid bulk is excluded from storage and from every per-step loop. Walls act
// through half-way bounce-back links and a precomputed adhesion vector.

#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "porefill/core.hpp"
#include "porefill/curve.hpp"
#include "porefill/voxel_image.hpp"

namespace porefill::lbm {

using voxelgrid::VoxelImage;

inline constexpr int kQ = 19;

// Velocity set: rest, the six axis directions, then the twelve edge
// diagonals; opposite directions are adjacent pairs.
inline constexpr std::array<std::array<int, 3>, kQ> kVel{{
    {0, 0, 0},  {1, 0, 0},  {-1, 0, 0}, {0, 1, 0},  {0, -1, 0},
    {0, 0, 1},  {0, 0, -1}, {1, 1, 0},  {-1, -1, 0}, {1, -1, 0},
    {-1, 1, 0}, {1, 0, 1},  {-1, 0, -1}, {1, 0, -1}, {-1, 0, 1},
    {0, 1, 1},  {0, -1, -1}, {0, 1, -1}, {0, -1, 1},
}};

inline constexpr double kWAxis = 1.0 / 18.0;
inline constexpr double kWDiag = 1.0 / 36.0;
inline constexpr std::array<double, kQ> kWeight{
    1.0 / 3.0, kWAxis, kWAxis, kWAxis, kWAxis, kWAxis, kWAxis,
    kWDiag,    kWDiag, kWDiag, kWDiag, kWDiag, kWDiag, kWDiag,
    kWDiag,    kWDiag, kWDiag, kWDiag, kWDiag,
};

inline constexpr std::array<int, kQ> kOpposite{
    0, 2, 1, 4, 3, 6, 5, 8, 7, 10, 9, 12, 11, 14, 13, 16, 15, 18, 17,
};

enum class CellType : uint8_t {
    FLUID = 0,
    SOLID_INTERFACE = 1,
    SOLID_BULK = 2,
    INLET = 3,
    OUTLET = 4,
};

struct ShanChenParams {
    double g_ab = 2.0;       // inter-component coupling
    double g_ads_a = 0.0;    // wall adhesion, electrolyte
    double g_ads_b = 0.0;    // wall adhesion, gas
    double tau_a = 1.0;
    double tau_b = 1.0;
    double rho_init_a = 1.0;  // majority density of the electrolyte phase
    double rho_init_b = 1.0;  // majority density of the gas phase
    double rho_minor = 0.02;  // dissolved minority density at initialization

    void validate() const;  // tau_k > 0.5
    uint64_t hash() const;
};

struct FillProtocol {
    std::vector<double> pressure_steps;  // ascending inlet density offsets
    int steps_per_level = 200000;
    double convergence_tol = 1e-3;  // relative saturation change per 1000 steps

    void validate() const;
};

struct LatticeOptions {
    std::array<bool, 3> periodic{false, false, false};
    bool with_reservoirs = false;
    Face inlet = Face::XMin;
    Face outlet = Face::XMax;
};

class Lattice {
  public:
    Lattice(const VoxelImage& img, const ShanChenParams& params,
            const LatticeOptions& options);

    // Advances n timesteps. Results are bit-identical for any worker count:
    // cells are partitioned by index, every distribution slot has exactly one
    // writer, and phases are separated by barriers.
    void run_steps(int n, int workers = 1);
    void step(int workers = 1) { run_steps(1, workers); }

    // Reservoir densities: inlet holds electrolyte at rho_init_a + offset,
    // outlet holds gas at rho_init_b.
    void set_inlet_offset(double offset);
    double inlet_offset() const { return inlet_offset_; }

    // Replaces the state of one component with equilibrium at (rho, u) on
    // every active cell.
    void init_equilibrium(int component, double rho, const std::array<double, 3>& u);
    // Per-cell density override for constructed initial conditions.
    void set_density(int component, int x, int y, int z, double rho);

    double mass(int component) const;  // serial fixed-order sum
    double saturation() const;         // electrolyte-majority active cells / active cells
    std::vector<double> density_field(int component) const;  // full grid, 0 in solids
    std::array<double, 3> velocity(int x, int y, int z) const;
    double pressure(int x, int y, int z) const;  // Shan-Chen equation of state

    // FNV-1a over dims, step index and both distribution arrays.
    uint64_t state_hash() const;
    // Throws NUMERIC_BLOWUP when any density is NaN or above 1e6.
    void check_health() const;

    // Majority phase label per pore voxel on top of the base image solids.
    VoxelImage to_image() const;

    void save_checkpoint(const std::string& path) const;
    // Restores distributions written by save_checkpoint into a lattice built
    // from the same image, parameters and options.
    void load_checkpoint(const std::string& path);

    int64_t active_count() const { return static_cast<int64_t>(cell_of_.size()); }
    // Cells read or written per step; solid bulk and interface cells hold no
    // state, so this equals the active-cell count.
    int64_t touched_cells() const { return active_count(); }
    bool spanning_pore_path() const { return spanning_pore_path_; }
    uint64_t step_index() const { return step_index_; }
    int level_index() const { return level_index_; }
    void set_level_index(int level) { level_index_ = level; }
    const ShanChenParams& params() const { return params_; }
    Face inlet_face() const { return options_.inlet; }
    CellType cell_type(int x, int y, int z) const;

  private:
    void build_topology(const VoxelImage& img);
    void initialize_state(const VoxelImage& img);
    void compute_densities(int64_t begin, int64_t end);
    void collide_stream(int64_t begin, int64_t end);
    void finish_step();  // reservoir overwrite, buffer swap, step counter
    void refresh_reservoir_feq();
    double cell_rho(const std::vector<double>& f, int64_t c) const;

    int nx_ = 0, ny_ = 0, nz_ = 0;
    double voxel_size_ = 1.0;
    ShanChenParams params_;
    LatticeOptions options_;
    std::vector<uint8_t> cell_type_;   // full grid
    std::vector<int32_t> active_of_;   // full grid -> active index or -1
    std::vector<int32_t> cell_of_;     // active index -> voxel index
    std::vector<int32_t> links_;       // q-major; target active cell or -1 (wall)
    std::vector<double> adhesion_;     // 3 per active cell
    std::vector<int32_t> inlet_cells_;
    std::vector<int32_t> outlet_cells_;

    std::vector<double> f_a_, f_b_;            // q-major distributions
    std::vector<double> f_a_next_, f_b_next_;  // write buffers
    std::vector<double> rho_a_, rho_b_;        // per-step density fields

    std::array<double, kQ> inlet_feq_a_{}, inlet_feq_b_{};
    std::array<double, kQ> outlet_feq_a_{}, outlet_feq_b_{};
    double inlet_offset_ = 0.0;
    uint64_t step_index_ = 0;
    int level_index_ = -1;
    bool spanning_pore_path_ = true;
};

// Solid-classified image, bounce-back walls on the domain skin, reservoir
// layers on two opposite faces. Pore voxels start gas-filled, the inlet
// layer holds electrolyte. Emits no error when inlet and outlet are not
// connected through the pore space (partial filling is still meaningful);
// query spanning_pore_path() instead.
Lattice init_lattice(const VoxelImage& img, const ShanChenParams& params, Face inlet,
                     Face outlet);

struct FillResult {
    PressureSaturationCurve curve;  // lattice units: (inlet offset, saturation)
    std::vector<int> steps_per_level;
};

struct GasCluster {
    int64_t voxels = 0;
    bool touches_inlet = false;
};

struct GasAnalysis {
    double final_saturation = 0.0;
    int cluster_count = 0;
    std::vector<GasCluster> clusters;  // descending size
    double wetted_solid_fraction = 0.0;
};

// Quasi-static filling: for each pressure step, hold the inlet offset and run
// until the relative saturation change per 1000 steps drops below the
// protocol tolerance or the level budget is exhausted, then record one curve
// point. The lattice is left at the final state for gas analysis.
FillResult fill_simulation(Lattice& lattice, const FillProtocol& protocol,
                           int workers = 1, bool verbose = false);

GasAnalysis residual_gas_analysis(const VoxelImage& filled, Face inlet);
GasAnalysis residual_gas_analysis(const Lattice& lattice);

}  // namespace porefill::lbm
