// Connected-component labeling over a chosen label subset, 6- or
// 26-adjacency. Region ids are canonical: ordered by descending voxel count,
// ties broken by the smallest linear index in the region.

#pragma once

#include <cstdint>
#include <initializer_list>
#include <vector>

#include "porefill/voxel_image.hpp"

namespace porefill::voxelgrid {

struct LabelSet {
    std::uint8_t mask = 0;
    LabelSet() = default;
    LabelSet(std::initializer_list<std::uint8_t> labels) {
        for (auto l : labels) add(l);
    }
    void add(std::uint8_t l) { mask |= static_cast<std::uint8_t>(1u << l); }
    bool contains(std::uint8_t l) const { return (mask >> l) & 1u; }
};

struct LabelField {
    int nx = 0, ny = 0, nz = 0;
    std::vector<std::int32_t> ids;  // 0 = background, regions 1..count
    std::int32_t count = 0;

    std::int64_t index(int x, int y, int z) const {
        return x + std::int64_t(nx) * (y + std::int64_t(ny) * z);
    }
    // voxel count per region, indexed 1..count (entry 0 unused)
    std::vector<std::int64_t> region_sizes() const;
};

LabelField connected_components(const VoxelImage& img, LabelSet phases, int connectivity);

}  // namespace porefill::voxelgrid
