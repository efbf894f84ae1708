#include "porefill/voxel_image.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace porefill::voxelgrid {

VoxelImage::VoxelImage(int nx_, int ny_, int nz_, double voxel_size_, std::uint8_t fill)
    : nx(nx_), ny(ny_), nz(nz_), voxel_size(voxel_size_) {
    if (nx <= 0 || ny <= 0 || nz <= 0)
        throw Error(ErrorCode::BAD_GEOMETRY, "voxel counts must be positive");
    if (!(voxel_size > 0.0))
        throw Error(ErrorCode::BAD_GEOMETRY, "voxel_size must be positive");
    labels.assign(static_cast<std::size_t>(size()), fill);
}

bool VoxelImage::on_face(int x, int y, int z, Face f) const {
    switch (f) {
        case Face::XMin: return x == 0;
        case Face::XMax: return x == nx - 1;
        case Face::YMin: return y == 0;
        case Face::YMax: return y == ny - 1;
        case Face::ZMin: return z == 0;
        case Face::ZMax: return z == nz - 1;
    }
    return false;
}

std::uint64_t VoxelImage::content_hash() const {
    Fnv1a64 h;
    h.update_value(nx);
    h.update_value(ny);
    h.update_value(nz);
    h.update_value(voxel_size);
    h.update(labels.data(), labels.size());
    return h.digest();
}

const std::array<std::array<int, 3>, 6> kFaceNeighbors = {{
    {{-1, 0, 0}}, {{1, 0, 0}}, {{0, -1, 0}}, {{0, 1, 0}}, {{0, 0, -1}}, {{0, 0, 1}},
}};

namespace {
std::array<std::array<int, 3>, 26> make_full_neighbors() {
    std::array<std::array<int, 3>, 26> out{};
    int n = 0;
    for (int dz = -1; dz <= 1; ++dz)
        for (int dy = -1; dy <= 1; ++dy)
            for (int dx = -1; dx <= 1; ++dx) {
                if (dx == 0 && dy == 0 && dz == 0) continue;
                out[n++] = {dx, dy, dz};
            }
    return out;
}
}  // namespace

const std::array<std::array<int, 3>, 26> kFullNeighbors = make_full_neighbors();

double porosity(const VoxelImage& img) {
    std::int64_t open = 0;
    for (std::uint8_t l : img.labels)
        if (is_fluid(l)) ++open;
    return static_cast<double>(open) / static_cast<double>(img.size());
}

VoxelImage classify_solid(const VoxelImage& img) {
    VoxelImage out = img;
    for (int z = 0; z < img.nz; ++z) {
        for (int y = 0; y < img.ny; ++y) {
            for (int x = 0; x < img.nx; ++x) {
                std::uint8_t l = img.at(x, y, z);
                if (!is_solid(l)) continue;
                bool interface = false;
                for (const auto& d : kFaceNeighbors) {
                    int xn = x + d[0], yn = y + d[1], zn = z + d[2];
                    if (!img.in_bounds(xn, yn, zn) || is_fluid(img.at(xn, yn, zn))) {
                        interface = true;
                        break;
                    }
                }
                out.at(x, y, z) = interface ? SOLID_INTERFACE : SOLID_BULK;
            }
        }
    }
    return out;
}

VoxelImage perforate(const VoxelImage& img, double hole_diameter_um, double pitch_um,
                     double depth_um, int axis) {
    if (!(hole_diameter_um < pitch_um))
        throw Error(ErrorCode::BAD_GEOMETRY, "hole_diameter must be smaller than pitch");
    if (axis < 0 || axis > 2)
        throw Error(ErrorCode::BAD_GEOMETRY, "axis must be 0, 1 or 2");
    const int dims[3] = {img.nx, img.ny, img.nz};
    const double extent = dims[axis] * img.voxel_size;
    if (depth_um > extent + 1e-9)
        throw Error(ErrorCode::BAD_GEOMETRY, "depth exceeds domain extent along axis");
    if (depth_um <= 0.0) return img;

    const int u_axis = (axis + 1) % 3;
    const int v_axis = (axis + 2) % 3;
    const double r = 0.5 * hole_diameter_um;
    const double r2 = r * r;
    const double h = img.voxel_size;

    VoxelImage out = img;
    for (int z = 0; z < img.nz; ++z) {
        for (int y = 0; y < img.ny; ++y) {
            for (int x = 0; x < img.nx; ++x) {
                if (!is_solid(img.at(x, y, z))) continue;
                const int c[3] = {x, y, z};
                double a = (c[axis] + 0.5) * h;  // depth coordinate of voxel center
                if (a > depth_um) continue;
                // nearest hole center on the square grid
                double u = (c[u_axis] + 0.5) * h;
                double v = (c[v_axis] + 0.5) * h;
                double cu = (std::floor(u / pitch_um) + 0.5) * pitch_um;
                double cv = (std::floor(v / pitch_um) + 0.5) * pitch_um;
                double du = u - cu, dv = v - cv;
                if (du * du + dv * dv <= r2) out.at(x, y, z) = PORE;
            }
        }
    }
    return out;
}

VoxelImage crop(const VoxelImage& img, int x0, int y0, int z0, int nx, int ny, int nz) {
    if (nx <= 0 || ny <= 0 || nz <= 0 || x0 < 0 || y0 < 0 || z0 < 0 ||
        x0 + nx > img.nx || y0 + ny > img.ny || z0 + nz > img.nz)
        throw Error(ErrorCode::BAD_GEOMETRY, "crop box leaves the image");
    VoxelImage out(nx, ny, nz, img.voxel_size);
    for (int z = 0; z < nz; ++z)
        for (int y = 0; y < ny; ++y)
            for (int x = 0; x < nx; ++x)
                out.labels[out.index(x, y, z)] = img.labels[img.index(x0 + x, y0 + y, z0 + z)];
    return out;
}

VoxelImage generate_sphere_pack(int nx, int ny, int nz, double voxel_size_um,
                                double radius_mean_um, double radius_sd_um,
                                double target_porosity, std::uint64_t seed) {
    if (!(target_porosity > 0.0 && target_porosity < 1.0))
        throw Error(ErrorCode::NONPOSITIVE_INPUT,
                    "target_porosity must lie strictly between 0 and 1");
    if (radius_mean_um < 2.0 * voxel_size_um)
        throw Error(ErrorCode::BAD_GEOMETRY, "radius_mean must be at least 2 voxels");

    VoxelImage img(nx, ny, nz, voxel_size_um, PORE);
    const double h = voxel_size_um;
    const std::int64_t total = img.size();
    std::int64_t solid_count = 0;
    const std::int64_t target_solid =
        static_cast<std::int64_t>(std::llround((1.0 - target_porosity) * total));

    std::mt19937_64 rng(seed);
    const std::int64_t max_attempts = 1000000;
    for (std::int64_t attempt = 0; attempt < max_attempts; ++attempt) {
        if (solid_count >= target_solid) break;
        double cx = uniform_in(rng, 0.0, nx * h);
        double cy = uniform_in(rng, 0.0, ny * h);
        double cz = uniform_in(rng, 0.0, nz * h);
        double r = normal(rng, radius_mean_um, radius_sd_um);
        if (r < voxel_size_um) r = voxel_size_um;
        double r2 = r * r;

        int x0 = std::max(0, static_cast<int>(std::floor((cx - r) / h)));
        int x1 = std::min(nx - 1, static_cast<int>(std::ceil((cx + r) / h)));
        int y0 = std::max(0, static_cast<int>(std::floor((cy - r) / h)));
        int y1 = std::min(ny - 1, static_cast<int>(std::ceil((cy + r) / h)));
        int z0 = std::max(0, static_cast<int>(std::floor((cz - r) / h)));
        int z1 = std::min(nz - 1, static_cast<int>(std::ceil((cz + r) / h)));
        for (int z = z0; z <= z1; ++z) {
            double dz = (z + 0.5) * h - cz;
            for (int y = y0; y <= y1; ++y) {
                double dy = (y + 0.5) * h - cy;
                double rem = r2 - dz * dz - dy * dy;
                if (rem < 0.0) continue;
                for (int x = x0; x <= x1; ++x) {
                    double dx = (x + 0.5) * h - cx;
                    if (dx * dx <= rem) {
                        auto& l = img.at(x, y, z);
                        if (l == PORE) {
                            l = SOLID_BULK;
                            ++solid_count;
                        }
                    }
                }
            }
        }
    }
    if (solid_count < target_solid) {
        double reached = 1.0 - static_cast<double>(solid_count) / total;
        if (reached > target_porosity + 0.02)
            throw Error(ErrorCode::UNREACHABLE_POROSITY,
                        "placement budget exhausted at porosity " + format_double(reached));
    }
    return img;
}

void write_vxi(const VoxelImage& img, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::IO_ERROR, "cannot write " + path);
    out << "VXI1 " << img.nx << ' ' << img.ny << ' ' << img.nz << ' '
        << format_double(img.voxel_size) << '\n';
    out.write(reinterpret_cast<const char*>(img.labels.data()),
              static_cast<std::streamsize>(img.labels.size()));
    if (!out) throw Error(ErrorCode::IO_ERROR, "short write to " + path);
}

VoxelImage read_vxi(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IO_ERROR, "cannot open " + path);
    std::string header;
    if (!std::getline(in, header)) throw Error(ErrorCode::BAD_FORMAT, "missing header");
    std::istringstream hs(header);
    std::string magic;
    int nx, ny, nz;
    double voxel;
    if (!(hs >> magic >> nx >> ny >> nz >> voxel) || magic != "VXI1")
        throw Error(ErrorCode::BAD_FORMAT, "bad .vxi header in " + path);
    if (nx <= 0 || ny <= 0 || nz <= 0 || !(voxel > 0.0))
        throw Error(ErrorCode::BAD_FORMAT, "bad dimensions in " + path);
    VoxelImage img(nx, ny, nz, voxel);
    in.read(reinterpret_cast<char*>(img.labels.data()),
            static_cast<std::streamsize>(img.labels.size()));
    if (in.gcount() != static_cast<std::streamsize>(img.labels.size()))
        throw Error(ErrorCode::BAD_FORMAT, "truncated payload in " + path);
    for (std::uint8_t l : img.labels)
        if (l >= kNumLabels)
            throw Error(ErrorCode::BAD_FORMAT, "reserved label code in " + path);
    return img;
}

void write_vtk(const VoxelImage& img, const std::string& path,
               const std::string& field_name) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::IO_ERROR, "cannot write " + path);
    out << "# vtk DataFile Version 3.0\n";
    out << "porefill voxel image\n";
    out << "ASCII\n";
    out << "DATASET STRUCTURED_POINTS\n";
    out << "DIMENSIONS " << img.nx << ' ' << img.ny << ' ' << img.nz << '\n';
    out << "ORIGIN 0 0 0\n";
    out << "SPACING " << format_double(img.voxel_size) << ' ' << format_double(img.voxel_size)
        << ' ' << format_double(img.voxel_size) << '\n';
    out << "POINT_DATA " << img.size() << '\n';
    out << "SCALARS " << field_name << " unsigned_char 1\n";
    out << "LOOKUP_TABLE default\n";
    int col = 0;
    for (std::uint8_t l : img.labels) {
        out << static_cast<int>(l);
        if (++col == 20) {
            out << '\n';
            col = 0;
        } else {
            out << ' ';
        }
    }
    if (col != 0) out << '\n';
    if (!out) throw Error(ErrorCode::IO_ERROR, "short write to " + path);
}

}  // namespace porefill::voxelgrid
