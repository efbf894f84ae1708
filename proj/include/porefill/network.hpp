// Pore-network extraction: smoothed distance map, peak detection with
// plateau canonicalization and proximity merging, marker-based watershed,
// and pore/throat property measurement.

#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "porefill/connected_components.hpp"
#include "porefill/voxel_image.hpp"

namespace porefill::netextract {

using voxelgrid::VoxelImage;

struct Pore {
    int id = 0;
    std::array<double, 3> center{};  // um
    double inscribed_diameter = 0.0;  // um
    double volume = 0.0;              // um^3
    std::int64_t region_voxels = 0;
};

struct Throat {
    int pore_a = 0;  // pore_a < pore_b
    int pore_b = 0;
    double diameter = 0.0;  // um
    double length = 0.0;    // um
};

struct PoreNetwork {
    std::vector<Pore> pores;
    std::vector<Throat> throats;
    // pores (ids) whose region touches each domain face, sorted ascending
    std::array<std::vector<int>, 6> face_labels;

    double total_pore_volume() const;
};

struct SnowParams {
    double sigma = 0.4;          // Gaussian smoothing std-dev [voxels]
    int maxfilter_radius = 4;    // peak-detection structuring radius [voxels]
    double merge_radius_factor = 0.75;
};

// Full extraction pipeline. Requires at least one PORE voxel.
// Optionally returns the watershed basins (same dims as img) via `basins_out`.
PoreNetwork extract_network(const VoxelImage& img, const SnowParams& params,
                            voxelgrid::LabelField* basins_out = nullptr);

// Volume-weighted median inscribed diameter: smallest d such that pores with
// inscribed_diameter <= d hold at least half the total pore volume.
double median_pore_diameter(const PoreNetwork& net);

struct NetworkStats {
    std::int64_t pore_count = 0;
    std::int64_t throat_count = 0;
    double d50 = 0.0;               // um
    double mean_coordination = 0.0;  // 2*throats/pores
};

NetworkStats network_stats(const PoreNetwork& net);

// CSV serialization (header row, LF endings).
void write_network_csv(const PoreNetwork& net, const std::string& pores_path,
                       const std::string& throats_path);
PoreNetwork read_network_csv(const std::string& pores_path, const std::string& throats_path);

// Gaussian smoothing with clamp-to-edge boundaries, exposed for tests.
std::vector<double> gaussian_smooth(const VoxelImage& dims_source,
                                    const std::vector<double>& field, double sigma);

}  // namespace porefill::netextract
