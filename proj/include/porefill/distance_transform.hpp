// Exact Euclidean distance transform, separable squared-distance passes.
// Chamfer approximations are deliberately avoided: the watershed peak
// detection downstream is sensitive to plateau artifacts.

#pragma once

#include <cstdint>
#include <vector>

#include "porefill/voxel_image.hpp"

namespace porefill::voxelgrid {

// Squared distance assigned to `phase` voxels when no non-phase voxel exists.
constexpr std::int64_t kUnboundedSq = std::int64_t(1) << 60;

// Squared Euclidean distance (voxel units) from each `phase` voxel to the
// nearest non-`phase` voxel; 0 on non-phase voxels. Exact in integers.
std::vector<std::int64_t> distance_transform_sq(const VoxelImage& img, std::uint8_t phase);

// sqrt of the squared transform, in voxel units.
std::vector<double> distance_transform(const VoxelImage& img, std::uint8_t phase);

}  // namespace porefill::voxelgrid
