#include "porefill/network.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <queue>
#include <sstream>

#include "porefill/distance_transform.hpp"

namespace porefill::netextract {

using voxelgrid::LabelField;
using voxelgrid::LabelSet;
using voxelgrid::PORE;

double PoreNetwork::total_pore_volume() const {
    double v = 0.0;
    for (const auto& p : pores) v += p.volume;
    return v;
}

std::vector<double> gaussian_smooth(const VoxelImage& img, const std::vector<double>& field,
                                    double sigma) {
    if (sigma <= 0.0) return field;
    const int kr = std::max(1, static_cast<int>(std::ceil(3.0 * sigma)));
    std::vector<double> kernel(static_cast<std::size_t>(2 * kr + 1));
    double norm = 0.0;
    for (int i = -kr; i <= kr; ++i) {
        kernel[static_cast<std::size_t>(i + kr)] = std::exp(-0.5 * i * i / (sigma * sigma));
        norm += kernel[static_cast<std::size_t>(i + kr)];
    }
    for (auto& w : kernel) w /= norm;

    const int dims[3] = {img.nx, img.ny, img.nz};
    std::vector<double> cur = field, next(field.size());
    for (int axis = 0; axis < 3; ++axis) {
        const int n = dims[axis];
        for (int z = 0; z < img.nz; ++z) {
            for (int y = 0; y < img.ny; ++y) {
                for (int x = 0; x < img.nx; ++x) {
                    const int c[3] = {x, y, z};
                    double acc = 0.0;
                    for (int o = -kr; o <= kr; ++o) {
                        int p[3] = {x, y, z};
                        p[axis] = std::clamp(c[axis] + o, 0, n - 1);
                        acc += kernel[static_cast<std::size_t>(o + kr)] *
                               cur[static_cast<std::size_t>(img.index(p[0], p[1], p[2]))];
                    }
                    next[static_cast<std::size_t>(img.index(x, y, z))] = acc;
                }
            }
        }
        std::swap(cur, next);
    }
    return cur;
}

namespace {

// Separable box maximum filter (Chebyshev ball of radius r).
std::vector<double> max_filter(const VoxelImage& img, const std::vector<double>& field, int r) {
    const int dims[3] = {img.nx, img.ny, img.nz};
    std::vector<double> cur = field, next(field.size());
    for (int axis = 0; axis < 3; ++axis) {
        const int n = dims[axis];
        for (int z = 0; z < img.nz; ++z) {
            for (int y = 0; y < img.ny; ++y) {
                for (int x = 0; x < img.nx; ++x) {
                    const int c[3] = {x, y, z};
                    double m = -1.0;
                    int lo = std::max(0, c[axis] - r), hi = std::min(n - 1, c[axis] + r);
                    for (int o = lo; o <= hi; ++o) {
                        int p[3] = {x, y, z};
                        p[axis] = o;
                        m = std::max(m, cur[static_cast<std::size_t>(img.index(p[0], p[1], p[2]))]);
                    }
                    next[static_cast<std::size_t>(img.index(x, y, z))] = m;
                }
            }
        }
        std::swap(cur, next);
    }
    return cur;
}

struct Peak {
    std::int64_t voxel;
    double dt;  // raw distance at the peak (voxels)
};

}  // namespace

PoreNetwork extract_network(const VoxelImage& img, const SnowParams& params,
                            LabelField* basins_out) {
    if (params.sigma < 0.0 || params.maxfilter_radius < 1)
        throw Error(ErrorCode::BAD_GEOMETRY, "invalid SNOW parameters");

    std::int64_t pore_voxels = 0;
    for (std::uint8_t l : img.labels)
        if (l == PORE) ++pore_voxels;
    if (pore_voxels == 0) throw Error(ErrorCode::NO_PORE_PHASE, "image has no PORE voxels");

    const auto dt = voxelgrid::distance_transform(img, PORE);
    const auto smooth = gaussian_smooth(img, dt, params.sigma);
    const auto filt = max_filter(img, smooth, params.maxfilter_radius);

    // peak mask; plateaus collapse to their smallest linear index
    VoxelImage peak_mask(img.nx, img.ny, img.nz, img.voxel_size, 0);
    for (std::int64_t i = 0; i < img.size(); ++i) {
        if (img.labels[i] == PORE && smooth[static_cast<std::size_t>(i)] ==
                                         filt[static_cast<std::size_t>(i)])
            peak_mask.labels[static_cast<std::size_t>(i)] = 1;
    }
    LabelField plateaus = connected_components(peak_mask, LabelSet{1}, 26);
    std::vector<std::int64_t> canonical(static_cast<std::size_t>(plateaus.count) + 1, -1);
    for (std::int64_t i = 0; i < img.size(); ++i) {
        std::int32_t id = plateaus.ids[static_cast<std::size_t>(i)];
        if (id > 0 && canonical[static_cast<std::size_t>(id)] < 0)
            canonical[static_cast<std::size_t>(id)] = i;
    }

    std::vector<Peak> peaks;
    for (std::int32_t id = 1; id <= plateaus.count; ++id) {
        std::int64_t v = canonical[static_cast<std::size_t>(id)];
        peaks.push_back({v, dt[static_cast<std::size_t>(v)]});
    }
    std::sort(peaks.begin(), peaks.end(),
              [](const Peak& a, const Peak& b) { return a.voxel < b.voxel; });

    // proximity merge: pairs by ascending distance (ties by smaller peak
    // index); the kept peak is the one with larger dt. Thresholds and
    // distances are fixed, so one canonical pass over the sorted pair list is
    // equivalent to iterating until no pair qualifies.
    auto peak_pos = [&](std::int64_t v) {
        auto [x, y, z] = img.coords(v);
        return std::array<double, 3>{x + 0.5, y + 0.5, z + 0.5};
    };
    struct Pair {
        double dist;
        std::size_t i, j;
    };
    std::vector<Pair> pairs;
    for (std::size_t i = 0; i < peaks.size(); ++i) {
        auto pi = peak_pos(peaks[i].voxel);
        for (std::size_t j = i + 1; j < peaks.size(); ++j) {
            auto pj = peak_pos(peaks[j].voxel);
            double dx = pi[0] - pj[0], dy = pi[1] - pj[1], dz = pi[2] - pj[2];
            double dist = std::sqrt(dx * dx + dy * dy + dz * dz);
            if (dist < params.merge_radius_factor * std::max(peaks[i].dt, peaks[j].dt))
                pairs.push_back({dist, i, j});
        }
    }
    std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
        if (a.dist != b.dist) return a.dist < b.dist;
        if (a.i != b.i) return a.i < b.i;
        return a.j < b.j;
    });
    std::vector<bool> alive(peaks.size(), true);
    for (const auto& p : pairs) {
        if (!alive[p.i] || !alive[p.j]) continue;
        if (peaks[p.i].dt > peaks[p.j].dt)
            alive[p.j] = false;
        else if (peaks[p.j].dt > peaks[p.i].dt)
            alive[p.i] = false;
        else
            alive[p.j] = false;  // equal dt: keep the smaller linear index
    }
    std::vector<Peak> survivors;
    for (std::size_t i = 0; i < peaks.size(); ++i)
        if (alive[i]) survivors.push_back(peaks[i]);
    if (survivors.empty()) throw Error(ErrorCode::EMPTY_NETWORK, "no peaks survived correction");

    // The max filter and the proximity merge both act across thin solid
    // walls, so a small isolated pore component can lose every candidate
    // peak. The flood below only reaches marked components; give such a
    // component its deepest voxel back as a marker.
    {
        const LabelField comps = connected_components(img, LabelSet{PORE}, 26);
        std::vector<char> has_peak(static_cast<std::size_t>(comps.count) + 1, 0);
        for (const auto& s : survivors)
            has_peak[static_cast<std::size_t>(comps.ids[static_cast<std::size_t>(s.voxel)])] = 1;
        std::vector<std::int64_t> rescue(static_cast<std::size_t>(comps.count) + 1, -1);
        for (std::int64_t i = 0; i < img.size(); ++i) {
            const std::int32_t c = comps.ids[static_cast<std::size_t>(i)];
            if (c == 0 || has_peak[static_cast<std::size_t>(c)]) continue;
            auto& r = rescue[static_cast<std::size_t>(c)];
            if (r < 0 || dt[static_cast<std::size_t>(i)] > dt[static_cast<std::size_t>(r)]) r = i;
        }
        for (std::int32_t c = 1; c <= comps.count; ++c) {
            const std::int64_t v = rescue[static_cast<std::size_t>(c)];
            if (v >= 0) survivors.push_back({v, dt[static_cast<std::size_t>(v)]});
        }
        std::sort(survivors.begin(), survivors.end(),
                  [](const Peak& a, const Peak& b) { return a.voxel < b.voxel; });
    }

    // marker-based watershed on the negated smoothed map: flood pore voxels
    // from the markers, highest smoothed distance first.
    LabelField basins;
    basins.nx = img.nx;
    basins.ny = img.ny;
    basins.nz = img.nz;
    basins.ids.assign(static_cast<std::size_t>(img.size()), 0);
    basins.count = static_cast<std::int32_t>(survivors.size());

    struct QueueEntry {
        double value;
        std::int64_t voxel;
        std::int32_t label;
    };
    auto cmp = [](const QueueEntry& a, const QueueEntry& b) {
        if (a.value != b.value) return a.value < b.value;  // max-heap on value
        return a.voxel > b.voxel;                          // then smallest voxel first
    };
    std::priority_queue<QueueEntry, std::vector<QueueEntry>, decltype(cmp)> heap(cmp);
    for (std::size_t k = 0; k < survivors.size(); ++k) {
        std::int64_t v = survivors[k].voxel;
        basins.ids[static_cast<std::size_t>(v)] = static_cast<std::int32_t>(k) + 1;
        heap.push({smooth[static_cast<std::size_t>(v)], v, static_cast<std::int32_t>(k) + 1});
    }
    while (!heap.empty()) {
        auto e = heap.top();
        heap.pop();
        auto [x, y, z] = img.coords(e.voxel);
        for (const auto& d : voxelgrid::kFullNeighbors) {
            int xn = x + d[0], yn = y + d[1], zn = z + d[2];
            if (!img.in_bounds(xn, yn, zn)) continue;
            std::int64_t j = img.index(xn, yn, zn);
            if (img.labels[static_cast<std::size_t>(j)] != PORE) continue;
            if (basins.ids[static_cast<std::size_t>(j)] != 0) continue;
            basins.ids[static_cast<std::size_t>(j)] = e.label;
            heap.push({smooth[static_cast<std::size_t>(j)], j, e.label});
        }
    }

    // measure pores
    PoreNetwork net;
    const double h = img.voxel_size;
    net.pores.resize(survivors.size());
    for (std::size_t k = 0; k < survivors.size(); ++k) {
        auto& p = net.pores[k];
        auto [x, y, z] = img.coords(survivors[k].voxel);
        p.id = static_cast<int>(k);
        p.center = {(x + 0.5) * h, (y + 0.5) * h, (z + 0.5) * h};
        p.inscribed_diameter = 2.0 * survivors[k].dt * h;
    }
    for (std::int64_t i = 0; i < img.size(); ++i) {
        std::int32_t id = basins.ids[static_cast<std::size_t>(i)];
        if (id > 0) ++net.pores[static_cast<std::size_t>(id - 1)].region_voxels;
    }
    for (auto& p : net.pores) p.volume = static_cast<double>(p.region_voxels) * h * h * h;

    // throats: adjacent basin pairs across 26-neighbor boundaries; the
    // diameter comes from the largest raw distance value on the interface.
    std::map<std::pair<int, int>, double> interfaces;  // (a<b) -> max dt [voxels]
    for (std::int64_t i = 0; i < img.size(); ++i) {
        std::int32_t la = basins.ids[static_cast<std::size_t>(i)];
        if (la == 0) continue;
        auto [x, y, z] = img.coords(i);
        for (const auto& d : voxelgrid::kFullNeighbors) {
            int xn = x + d[0], yn = y + d[1], zn = z + d[2];
            if (!img.in_bounds(xn, yn, zn)) continue;
            std::int64_t j = img.index(xn, yn, zn);
            std::int32_t lb = basins.ids[static_cast<std::size_t>(j)];
            if (lb == 0 || lb == la) continue;
            const int lo = static_cast<int>(std::min(la, lb)) - 1;
            const int hi = static_cast<int>(std::max(la, lb)) - 1;
            double m = std::max(dt[static_cast<std::size_t>(i)], dt[static_cast<std::size_t>(j)]);
            auto [it, inserted] = interfaces.try_emplace({lo, hi}, m);
            if (!inserted && m > it->second) it->second = m;
        }
    }
    for (const auto& [key, maxdt] : interfaces) {
        const auto& pa = net.pores[static_cast<std::size_t>(key.first)];
        const auto& pb = net.pores[static_cast<std::size_t>(key.second)];
        double dx = pa.center[0] - pb.center[0];
        double dy = pa.center[1] - pb.center[1];
        double dz = pa.center[2] - pb.center[2];
        double center_dist = std::sqrt(dx * dx + dy * dy + dz * dz);
        double length = center_dist - 0.5 * (pa.inscribed_diameter + pb.inscribed_diameter);
        net.throats.push_back(
            {key.first, key.second, 2.0 * maxdt * h, std::max(length, h)});
    }

    // face contact from region voxels
    for (std::int64_t i = 0; i < img.size(); ++i) {
        std::int32_t id = basins.ids[static_cast<std::size_t>(i)];
        if (id == 0) continue;
        auto [x, y, z] = img.coords(i);
        for (int f = 0; f < 6; ++f) {
            if (img.on_face(x, y, z, static_cast<Face>(f)))
                net.face_labels[static_cast<std::size_t>(f)].push_back(id - 1);
        }
    }
    for (auto& v : net.face_labels) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
    }

    if (basins_out) *basins_out = std::move(basins);
    return net;
}

double median_pore_diameter(const PoreNetwork& net) {
    if (net.pores.empty()) throw Error(ErrorCode::EMPTY_NETWORK, "no pores");
    std::vector<std::size_t> order(net.pores.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return net.pores[a].inscribed_diameter < net.pores[b].inscribed_diameter;
    });
    const double half = 0.5 * net.total_pore_volume();
    double cum = 0.0;
    for (std::size_t i : order) {
        cum += net.pores[i].volume;
        if (cum >= half) return net.pores[i].inscribed_diameter;
    }
    return net.pores[order.back()].inscribed_diameter;
}

NetworkStats network_stats(const PoreNetwork& net) {
    if (net.pores.empty()) throw Error(ErrorCode::EMPTY_NETWORK, "no pores");
    NetworkStats s;
    s.pore_count = static_cast<std::int64_t>(net.pores.size());
    s.throat_count = static_cast<std::int64_t>(net.throats.size());
    s.d50 = median_pore_diameter(net);
    s.mean_coordination = 2.0 * static_cast<double>(s.throat_count) /
                          static_cast<double>(s.pore_count);
    return s;
}

namespace {

std::string faces_token(const PoreNetwork& net, int pore_id) {
    std::string out;
    for (int f = 0; f < 6; ++f) {
        const auto& v = net.face_labels[static_cast<std::size_t>(f)];
        if (std::binary_search(v.begin(), v.end(), pore_id)) {
            if (!out.empty()) out += '|';
            out += face_name(static_cast<Face>(f));
        }
    }
    return out;
}

}  // namespace

void write_network_csv(const PoreNetwork& net, const std::string& pores_path,
                       const std::string& throats_path) {
    std::ofstream pf(pores_path, std::ios::binary);
    if (!pf) throw Error(ErrorCode::IO_ERROR, "cannot write " + pores_path);
    pf << "id,x_um,y_um,z_um,diameter_um,volume_um3,faces\n";
    for (const auto& p : net.pores) {
        pf << p.id << ',' << format_double(p.center[0]) << ',' << format_double(p.center[1])
           << ',' << format_double(p.center[2]) << ',' << format_double(p.inscribed_diameter)
           << ',' << format_double(p.volume) << ',' << faces_token(net, p.id) << '\n';
    }
    std::ofstream tf(throats_path, std::ios::binary);
    if (!tf) throw Error(ErrorCode::IO_ERROR, "cannot write " + throats_path);
    tf << "pore_a,pore_b,diameter_um,length_um\n";
    for (const auto& t : net.throats) {
        tf << t.pore_a << ',' << t.pore_b << ',' << format_double(t.diameter) << ','
           << format_double(t.length) << '\n';
    }
}

PoreNetwork read_network_csv(const std::string& pores_path, const std::string& throats_path) {
    PoreNetwork net;
    std::ifstream pf(pores_path);
    if (!pf) throw Error(ErrorCode::IO_ERROR, "cannot open " + pores_path);
    std::string line;
    if (!std::getline(pf, line) || trim(line) != "id,x_um,y_um,z_um,diameter_um,volume_um3,faces")
        throw Error(ErrorCode::BAD_FORMAT, "bad pores.csv header in " + pores_path);
    while (std::getline(pf, line)) {
        if (trim(line).empty()) continue;
        auto cols = split(trim(line), ',');
        if (cols.size() != 7) throw Error(ErrorCode::BAD_FORMAT, "bad pore row: " + line);
        Pore p;
        p.id = std::stoi(cols[0]);
        p.center = {std::stod(cols[1]), std::stod(cols[2]), std::stod(cols[3])};
        p.inscribed_diameter = std::stod(cols[4]);
        p.volume = std::stod(cols[5]);
        p.region_voxels = 0;
        if (!cols[6].empty()) {
            for (const auto& tok : split(cols[6], '|'))
                net.face_labels[static_cast<std::size_t>(face_from_name(tok))].push_back(p.id);
        }
        net.pores.push_back(p);
    }
    for (auto& v : net.face_labels) std::sort(v.begin(), v.end());
    std::ifstream tf(throats_path);
    if (!tf) throw Error(ErrorCode::IO_ERROR, "cannot open " + throats_path);
    if (!std::getline(tf, line) || trim(line) != "pore_a,pore_b,diameter_um,length_um")
        throw Error(ErrorCode::BAD_FORMAT, "bad throats.csv header in " + throats_path);
    while (std::getline(tf, line)) {
        if (trim(line).empty()) continue;
        auto cols = split(trim(line), ',');
        if (cols.size() != 4) throw Error(ErrorCode::BAD_FORMAT, "bad throat row: " + line);
        net.throats.push_back(
            {std::stoi(cols[0]), std::stoi(cols[1]), std::stod(cols[2]), std::stod(cols[3])});
    }
    return net;
}

}  // namespace porefill::netextract
