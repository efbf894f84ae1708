#include "porefill/distance_transform.hpp"

#include <cmath>
#include <limits>

namespace porefill::voxelgrid {

namespace {

// Lower envelope of parabolas x -> (x - v)^2 + f[v] (Felzenszwalb/Huttenlocher),
// evaluated at integer sample points. Values stay in int64 range because f is
// capped by kUnboundedSq.
void squared_dt_1d(const std::int64_t* f, std::int64_t* out, int n, int stride,
                   std::vector<int>& v, std::vector<double>& z) {
    v.resize(static_cast<std::size_t>(n));
    z.resize(static_cast<std::size_t>(n) + 1);
    int k = 0;
    v[0] = 0;
    z[0] = -std::numeric_limits<double>::infinity();
    z[1] = std::numeric_limits<double>::infinity();
    for (int q = 1; q < n; ++q) {
        double fq = static_cast<double>(f[q * stride]) + static_cast<double>(q) * q;
        while (true) {
            int p = v[k];
            double fp = static_cast<double>(f[p * stride]) + static_cast<double>(p) * p;
            double s = (fq - fp) / (2.0 * (q - p));
            if (s <= z[k]) {
                --k;
                if (k < 0) {
                    k = 0;
                    v[0] = q;
                    z[0] = -std::numeric_limits<double>::infinity();
                    z[1] = std::numeric_limits<double>::infinity();
                    break;
                }
                continue;
            }
            ++k;
            v[k] = q;
            z[k] = s;
            z[k + 1] = std::numeric_limits<double>::infinity();
            break;
        }
    }
    k = 0;
    for (int q = 0; q < n; ++q) {
        while (z[k + 1] < q) ++k;
        std::int64_t d = q - v[k];
        std::int64_t val = d * d + f[v[k] * stride];
        out[q * stride] = val < kUnboundedSq ? val : kUnboundedSq;
    }
}

}  // namespace

std::vector<std::int64_t> distance_transform_sq(const VoxelImage& img, std::uint8_t phase) {
    const int nx = img.nx, ny = img.ny, nz = img.nz;
    std::vector<std::int64_t> d(static_cast<std::size_t>(img.size()));

    // pass 1: scanline distance along x (two sweeps), squared
    for (int z = 0; z < nz; ++z) {
        for (int y = 0; y < ny; ++y) {
            std::int64_t base = img.index(0, y, z);
            std::int64_t run = kUnboundedSq;  // distance (not squared) to nearest seed
            for (int x = 0; x < nx; ++x) {
                if (img.labels[base + x] != phase)
                    run = 0;
                else if (run < kUnboundedSq)
                    ++run;
                d[base + x] = run;
            }
            run = kUnboundedSq;
            for (int x = nx - 1; x >= 0; --x) {
                if (img.labels[base + x] != phase)
                    run = 0;
                else if (run < kUnboundedSq)
                    ++run;
                if (run < d[base + x]) d[base + x] = run;
            }
            for (int x = 0; x < nx; ++x) {
                std::int64_t v = d[base + x];
                d[base + x] = v >= kUnboundedSq ? kUnboundedSq : v * v;
            }
        }
    }

    std::vector<int> scratch_v;
    std::vector<double> scratch_z;
    std::vector<std::int64_t> column;

    // pass 2: along y
    column.resize(static_cast<std::size_t>(ny));
    std::vector<std::int64_t> col_out(static_cast<std::size_t>(ny));
    for (int z = 0; z < nz; ++z) {
        for (int x = 0; x < nx; ++x) {
            for (int y = 0; y < ny; ++y) column[y] = d[img.index(x, y, z)];
            squared_dt_1d(column.data(), col_out.data(), ny, 1, scratch_v, scratch_z);
            for (int y = 0; y < ny; ++y) d[img.index(x, y, z)] = col_out[y];
        }
    }

    // pass 3: along z
    column.resize(static_cast<std::size_t>(nz));
    col_out.resize(static_cast<std::size_t>(nz));
    for (int y = 0; y < ny; ++y) {
        for (int x = 0; x < nx; ++x) {
            for (int z = 0; z < nz; ++z) column[z] = d[img.index(x, y, z)];
            squared_dt_1d(column.data(), col_out.data(), nz, 1, scratch_v, scratch_z);
            for (int z = 0; z < nz; ++z) d[img.index(x, y, z)] = col_out[z];
        }
    }
    return d;
}

std::vector<double> distance_transform(const VoxelImage& img, std::uint8_t phase) {
    auto sq = distance_transform_sq(img, phase);
    std::vector<double> out(sq.size());
    for (std::size_t i = 0; i < sq.size(); ++i) out[i] = std::sqrt(static_cast<double>(sq[i]));
    return out;
}

}  // namespace porefill::voxelgrid
