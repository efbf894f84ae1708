// Labeled 3D voxel grid: the common structure representation consumed by
// network extraction, the lattice Boltzmann solver and the transport solver.
//
// Linear index convention: i = x + nx*(y + ny*z), x fastest.

#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "porefill/core.hpp"

namespace porefill::voxelgrid {

enum Label : std::uint8_t {
    PORE = 0,
    SOLID_BULK = 1,
    SOLID_INTERFACE = 2,
    ELECTROLYTE = 3,
    GAS = 4,
};

constexpr std::uint8_t kNumLabels = 5;

inline bool is_solid(std::uint8_t l) { return l == SOLID_BULK || l == SOLID_INTERFACE; }
inline bool is_fluid(std::uint8_t l) { return !is_solid(l); }

struct VoxelImage {
    int nx = 0, ny = 0, nz = 0;
    double voxel_size = 1.0;  // edge length [um]
    std::vector<std::uint8_t> labels;

    VoxelImage() = default;
    VoxelImage(int nx_, int ny_, int nz_, double voxel_size_, std::uint8_t fill = PORE);

    std::int64_t size() const { return std::int64_t(nx) * ny * nz; }
    std::int64_t index(int x, int y, int z) const {
        return x + std::int64_t(nx) * (y + std::int64_t(ny) * z);
    }
    bool in_bounds(int x, int y, int z) const {
        return x >= 0 && x < nx && y >= 0 && y < ny && z >= 0 && z < nz;
    }
    std::uint8_t& at(int x, int y, int z) { return labels[index(x, y, z)]; }
    std::uint8_t at(int x, int y, int z) const { return labels[index(x, y, z)]; }

    std::array<int, 3> coords(std::int64_t i) const {
        int x = static_cast<int>(i % nx);
        std::int64_t r = i / nx;
        return {x, static_cast<int>(r % ny), static_cast<int>(r / ny)};
    }

    // True if voxel (x,y,z) lies on the given domain face.
    bool on_face(int x, int y, int z, Face f) const;

    std::uint64_t content_hash() const;
};

// The 6 face-neighbor offsets, fixed order: -x,+x,-y,+y,-z,+z.
extern const std::array<std::array<int, 3>, 6> kFaceNeighbors;
// The 26-neighborhood offsets (all nonzero in {-1,0,1}^3), ascending order.
extern const std::array<std::array<int, 3>, 26> kFullNeighbors;

// Fraction of non-solid voxels (PORE + ELECTROLYTE + GAS).
double porosity(const VoxelImage& img);

// Relabels solid voxels: any solid voxel with a non-solid face neighbor, or
// sitting on the domain boundary (the outside counts as open), becomes
// SOLID_INTERFACE; the rest become SOLID_BULK. Idempotent.
VoxelImage classify_solid(const VoxelImage& img);

// Carves a square grid of cylindrical holes into the solid, entering from the
// axis-min face down to `depth`. Solid voxels inside a cylinder become PORE.
VoxelImage perforate(const VoxelImage& img, double hole_diameter_um, double pitch_um,
                     double depth_um, int axis);

// Copies the box [x0, x0+nx) x [y0, y0+ny) x [z0, z0+nz); bounds-checked.
VoxelImage crop(const VoxelImage& img, int x0, int y0, int z0, int nx, int ny, int nz);

// Overlapping-sphere Boolean model tuned to a target porosity by sequential
// placement. Deterministic for a fixed seed.
VoxelImage generate_sphere_pack(int nx, int ny, int nz, double voxel_size_um,
                                double radius_mean_um, double radius_sd_um,
                                double target_porosity, std::uint64_t seed);

// --- .vxi file format -------------------------------------------------------
// ASCII header "VXI1 <nx> <ny> <nz> <voxel_size_um>\n" followed by nx*ny*nz
// raw label bytes in linear index order. Labels above GAS are rejected.

void write_vxi(const VoxelImage& img, const std::string& path);
VoxelImage read_vxi(const std::string& path);

// Legacy VTK STRUCTURED_POINTS export (ASCII), write-only.
void write_vtk(const VoxelImage& img, const std::string& path,
               const std::string& field_name = "label");

}  // namespace porefill::voxelgrid
