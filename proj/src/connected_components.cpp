#include "porefill/connected_components.hpp"

#include <algorithm>
#include <numeric>

namespace porefill::voxelgrid {

std::vector<std::int64_t> LabelField::region_sizes() const {
    std::vector<std::int64_t> sizes(static_cast<std::size_t>(count) + 1, 0);
    for (std::int32_t id : ids)
        if (id > 0) ++sizes[static_cast<std::size_t>(id)];
    return sizes;
}

LabelField connected_components(const VoxelImage& img, LabelSet phases, int connectivity) {
    if (connectivity != 6 && connectivity != 26)
        throw Error(ErrorCode::BAD_GEOMETRY, "connectivity must be 6 or 26");

    LabelField field;
    field.nx = img.nx;
    field.ny = img.ny;
    field.nz = img.nz;
    field.ids.assign(static_cast<std::size_t>(img.size()), 0);

    const auto* offsets6 = kFaceNeighbors.data();
    const auto* offsets26 = kFullNeighbors.data();
    const int n_off = connectivity == 6 ? 6 : 26;

    std::vector<std::int64_t> stack;
    std::vector<std::int64_t> sizes;  // provisional id -> voxel count
    std::int32_t next_id = 0;

    // Ascending scan: provisional ids are ordered by each region's smallest
    // linear index, which feeds the canonical tie-break below.
    for (std::int64_t i = 0; i < img.size(); ++i) {
        if (field.ids[i] != 0 || !phases.contains(img.labels[i])) continue;
        ++next_id;
        std::int64_t count = 0;
        stack.push_back(i);
        field.ids[i] = next_id;
        while (!stack.empty()) {
            std::int64_t cur = stack.back();
            stack.pop_back();
            ++count;
            auto [x, y, z] = img.coords(cur);
            for (int k = 0; k < n_off; ++k) {
                const auto& d = connectivity == 6 ? offsets6[k] : offsets26[k];
                int xn = x + d[0], yn = y + d[1], zn = z + d[2];
                if (!img.in_bounds(xn, yn, zn)) continue;
                std::int64_t j = img.index(xn, yn, zn);
                if (field.ids[j] == 0 && phases.contains(img.labels[j])) {
                    field.ids[j] = next_id;
                    stack.push_back(j);
                }
            }
        }
        sizes.push_back(count);
    }

    // canonical order: descending size, ties by smallest linear index
    std::vector<std::int32_t> order(static_cast<std::size_t>(next_id));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::int32_t a, std::int32_t b) {
        return sizes[static_cast<std::size_t>(a)] > sizes[static_cast<std::size_t>(b)];
    });
    std::vector<std::int32_t> remap(static_cast<std::size_t>(next_id) + 1, 0);
    for (std::int32_t rank = 0; rank < next_id; ++rank)
        remap[static_cast<std::size_t>(order[static_cast<std::size_t>(rank)]) + 1] = rank + 1;
    for (auto& id : field.ids)
        if (id != 0) id = remap[static_cast<std::size_t>(id)];
    field.count = next_id;
    return field;
}

}  // namespace porefill::voxelgrid
