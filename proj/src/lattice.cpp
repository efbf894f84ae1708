#include "porefill/lattice.hpp"

#include <algorithm>
#include <barrier>
#include <cmath>
#include <cstring>
#include <fstream>
#include <functional>
#include <thread>

namespace porefill::lbm {

using voxelgrid::Label;

namespace {

constexpr char kCheckpointMagic[8] = {'P', 'F', 'L', 'B', 'C', '1', 0, 0};

double feq(int q, double rho, double ux, double uy, double uz) {
    const double eu = 3.0 * (kVel[q][0] * ux + kVel[q][1] * uy + kVel[q][2] * uz);
    const double usq = ux * ux + uy * uy + uz * uz;
    return kWeight[q] * rho * (1.0 + eu + 0.5 * eu * eu - 1.5 * usq);
}

}  // namespace

void ShanChenParams::validate() const {
    if (!(tau_a > 0.5) || !(tau_b > 0.5))
        throw Error(ErrorCode::CONFIG_ERROR,
                    "relaxation times must exceed 0.5 for positive viscosity");
    if (!(rho_init_a > 0.0) || !(rho_init_b > 0.0))
        throw Error(ErrorCode::CONFIG_ERROR, "initial densities must be positive");
    if (rho_minor < 0.0 || !std::isfinite(g_ab) || !std::isfinite(g_ads_a) ||
        !std::isfinite(g_ads_b))
        throw Error(ErrorCode::CONFIG_ERROR, "invalid Shan-Chen coupling parameters");
}

uint64_t ShanChenParams::hash() const {
    const double fields[8] = {g_ab,  g_ads_a,    g_ads_b,    tau_a,
                              tau_b, rho_init_a, rho_init_b, rho_minor};
    return hash_bytes(fields, sizeof(fields));
}

void FillProtocol::validate() const {
    for (size_t i = 0; i + 1 < pressure_steps.size(); ++i)
        if (!(pressure_steps[i] < pressure_steps[i + 1]))
            throw Error(ErrorCode::CONFIG_ERROR,
                        "pressure steps must be strictly ascending");
    for (double p : pressure_steps)
        if (!std::isfinite(p))
            throw Error(ErrorCode::CONFIG_ERROR, "pressure steps must be finite");
    if (steps_per_level <= 0)
        throw Error(ErrorCode::CONFIG_ERROR, "step budget per level must be positive");
    if (!(convergence_tol > 0.0))
        throw Error(ErrorCode::CONFIG_ERROR, "convergence tolerance must be positive");
}

Lattice::Lattice(const VoxelImage& img, const ShanChenParams& params,
                 const LatticeOptions& options)
    : params_(params), options_(options) {
    params_.validate();
    build_topology(img);
    initialize_state(img);
    refresh_reservoir_feq();
}

void Lattice::build_topology(const VoxelImage& img) {
    nx_ = img.nx;
    ny_ = img.ny;
    nz_ = img.nz;
    voxel_size_ = img.voxel_size;
    const int64_t nvox = static_cast<int64_t>(nx_) * ny_ * nz_;

    cell_type_.assign(static_cast<size_t>(nvox), static_cast<uint8_t>(CellType::FLUID));
    for (int64_t i = 0; i < nvox; ++i) {
        switch (img.labels[static_cast<size_t>(i)]) {
            case Label::SOLID_INTERFACE:
                cell_type_[i] = static_cast<uint8_t>(CellType::SOLID_INTERFACE);
                break;
            case Label::SOLID_BULK:
                cell_type_[i] = static_cast<uint8_t>(CellType::SOLID_BULK);
                break;
            default:
                cell_type_[i] = static_cast<uint8_t>(CellType::FLUID);
        }
    }

    if (options_.with_reservoirs) {
        if (options_.inlet == options_.outlet)
            throw Error(ErrorCode::BAD_GEOMETRY, "inlet and outlet must differ");
        for (int z = 0; z < nz_; ++z)
            for (int y = 0; y < ny_; ++y)
                for (int x = 0; x < nx_; ++x) {
                    const size_t i = img.index(x, y, z);
                    if (cell_type_[i] != static_cast<uint8_t>(CellType::FLUID)) continue;
                    if (img.on_face(x, y, z, options_.inlet))
                        cell_type_[i] = static_cast<uint8_t>(CellType::INLET);
                    else if (img.on_face(x, y, z, options_.outlet))
                        cell_type_[i] = static_cast<uint8_t>(CellType::OUTLET);
                }
    }

    active_of_.assign(static_cast<size_t>(nvox), -1);
    cell_of_.clear();
    for (int64_t i = 0; i < nvox; ++i) {
        const auto t = static_cast<CellType>(cell_type_[i]);
        if (t == CellType::SOLID_INTERFACE || t == CellType::SOLID_BULK) continue;
        active_of_[i] = static_cast<int32_t>(cell_of_.size());
        cell_of_.push_back(static_cast<int32_t>(i));
    }
    if (cell_of_.empty())
        throw Error(ErrorCode::NO_FLUID_CELLS, "image contains no open voxels");

    const int64_t n = active_count();
    links_.assign(static_cast<size_t>(n) * kQ, -1);
    adhesion_.assign(static_cast<size_t>(n) * 3, 0.0);
    inlet_cells_.clear();
    outlet_cells_.clear();

    const int dims[3] = {nx_, ny_, nz_};
    for (int64_t c = 0; c < n; ++c) {
        const auto [x, y, z] = img.coords(cell_of_[static_cast<size_t>(c)]);
        links_[c] = static_cast<int32_t>(c);  // rest direction stays put
        double sx = 0.0, sy = 0.0, sz = 0.0;
        for (int q = 1; q < kQ; ++q) {
            int t[3] = {x + kVel[q][0], y + kVel[q][1], z + kVel[q][2]};
            bool outside = false;
            for (int ax = 0; ax < 3; ++ax) {
                if (t[ax] < 0 || t[ax] >= dims[ax]) {
                    if (options_.periodic[ax])
                        t[ax] = (t[ax] + dims[ax]) % dims[ax];
                    else
                        outside = true;
                }
            }
            int32_t link = -1;
            if (!outside) {
                const size_t ti = img.index(t[0], t[1], t[2]);
                const auto tt = static_cast<CellType>(cell_type_[ti]);
                if (tt == CellType::SOLID_BULK && q <= 6)
                    throw Error(ErrorCode::BAD_GEOMETRY,
                                "open voxel touches solid bulk; classify the image first");
                if (tt != CellType::SOLID_INTERFACE && tt != CellType::SOLID_BULK)
                    link = active_of_[ti];
            }
            links_[static_cast<size_t>(q) * n + c] = link;
            if (link < 0) {
                sx += kWeight[q] * kVel[q][0];
                sy += kWeight[q] * kVel[q][1];
                sz += kWeight[q] * kVel[q][2];
            }
        }
        adhesion_[static_cast<size_t>(c) * 3 + 0] = sx;
        adhesion_[static_cast<size_t>(c) * 3 + 1] = sy;
        adhesion_[static_cast<size_t>(c) * 3 + 2] = sz;

        const auto ct = static_cast<CellType>(cell_type_[cell_of_[static_cast<size_t>(c)]]);
        if (ct == CellType::INLET) inlet_cells_.push_back(static_cast<int32_t>(c));
        if (ct == CellType::OUTLET) outlet_cells_.push_back(static_cast<int32_t>(c));
    }

    spanning_pore_path_ = true;
    if (options_.with_reservoirs) {
        std::vector<uint8_t> seen(static_cast<size_t>(n), 0);
        std::vector<int32_t> stack(inlet_cells_);
        for (int32_t c : stack) seen[static_cast<size_t>(c)] = 1;
        bool reached = false;
        while (!stack.empty() && !reached) {
            const int32_t c = stack.back();
            stack.pop_back();
            for (int q = 1; q <= 6; ++q) {
                const int32_t t = links_[static_cast<size_t>(q) * n + c];
                if (t < 0 || seen[static_cast<size_t>(t)]) continue;
                seen[static_cast<size_t>(t)] = 1;
                if (static_cast<CellType>(cell_type_[cell_of_[static_cast<size_t>(t)]]) ==
                    CellType::OUTLET) {
                    reached = true;
                    break;
                }
                stack.push_back(t);
            }
        }
        spanning_pore_path_ = reached;
    }
}

void Lattice::initialize_state(const VoxelImage& img) {
    const int64_t n = active_count();
    f_a_.assign(static_cast<size_t>(n) * kQ, 0.0);
    f_b_.assign(static_cast<size_t>(n) * kQ, 0.0);
    f_a_next_.assign(static_cast<size_t>(n) * kQ, 0.0);
    f_b_next_.assign(static_cast<size_t>(n) * kQ, 0.0);
    rho_a_.assign(static_cast<size_t>(n), 0.0);
    rho_b_.assign(static_cast<size_t>(n), 0.0);

    for (int64_t c = 0; c < n; ++c) {
        const size_t vox = static_cast<size_t>(cell_of_[static_cast<size_t>(c)]);
        const auto ct = static_cast<CellType>(cell_type_[vox]);
        const bool electrolyte_majority =
            ct == CellType::INLET ||
            (ct != CellType::OUTLET && img.labels[vox] == Label::ELECTROLYTE);
        const double ra = electrolyte_majority ? params_.rho_init_a : params_.rho_minor;
        const double rb = electrolyte_majority ? params_.rho_minor : params_.rho_init_b;
        for (int q = 0; q < kQ; ++q) {
            f_a_[static_cast<size_t>(q) * n + c] = kWeight[q] * ra;
            f_b_[static_cast<size_t>(q) * n + c] = kWeight[q] * rb;
        }
    }
}

void Lattice::refresh_reservoir_feq() {
    for (int q = 0; q < kQ; ++q) {
        inlet_feq_a_[q] = kWeight[q] * (params_.rho_init_a + inlet_offset_);
        inlet_feq_b_[q] = kWeight[q] * params_.rho_minor;
        outlet_feq_a_[q] = kWeight[q] * params_.rho_minor;
        outlet_feq_b_[q] = kWeight[q] * params_.rho_init_b;
    }
}

void Lattice::set_inlet_offset(double offset) {
    if (!std::isfinite(offset))
        throw Error(ErrorCode::CONFIG_ERROR, "inlet pressure offset must be finite");
    inlet_offset_ = offset;
    refresh_reservoir_feq();
}

void Lattice::init_equilibrium(int component, double rho,
                               const std::array<double, 3>& u) {
    std::vector<double>& f = component == 0 ? f_a_ : f_b_;
    const int64_t n = active_count();
    for (int q = 0; q < kQ; ++q) {
        const double v = feq(q, rho, u[0], u[1], u[2]);
        std::fill(f.begin() + static_cast<int64_t>(q) * n,
                  f.begin() + static_cast<int64_t>(q + 1) * n, v);
    }
}

void Lattice::set_density(int component, int x, int y, int z, double rho) {
    const int32_t c = active_of_[static_cast<size_t>(x) +
                                 static_cast<size_t>(nx_) *
                                     (static_cast<size_t>(y) +
                                      static_cast<size_t>(ny_) * static_cast<size_t>(z))];
    if (c < 0) throw Error(ErrorCode::BAD_GEOMETRY, "cannot set density on a solid voxel");
    std::vector<double>& f = component == 0 ? f_a_ : f_b_;
    const int64_t n = active_count();
    for (int q = 0; q < kQ; ++q) f[static_cast<size_t>(q) * n + c] = kWeight[q] * rho;
}

void Lattice::compute_densities(int64_t begin, int64_t end) {
    const int64_t n = active_count();
    double* ra = rho_a_.data();
    double* rb = rho_b_.data();
    const double* fa = f_a_.data();
    const double* fb = f_b_.data();
    for (int64_t c = begin; c < end; ++c) {
        ra[c] = fa[c];
        rb[c] = fb[c];
    }
    for (int q = 1; q < kQ; ++q) {
        const double* fa_q = fa + static_cast<int64_t>(q) * n;
        const double* fb_q = fb + static_cast<int64_t>(q) * n;
        for (int64_t c = begin; c < end; ++c) {
            ra[c] += fa_q[c];
            rb[c] += fb_q[c];
        }
    }
}

void Lattice::collide_stream(int64_t begin, int64_t end) {
    const int64_t n = active_count();
    const double g_ab = params_.g_ab;
    const double g_ads_a = params_.g_ads_a;
    const double g_ads_b = params_.g_ads_b;
    const double tau_a = params_.tau_a, tau_b = params_.tau_b;
    const double om_a = 1.0 / tau_a, om_b = 1.0 / tau_b;
    const double* RA = rho_a_.data();
    const double* RB = rho_b_.data();
    const double* FA = f_a_.data();
    const double* FB = f_b_.data();
    double* XA = f_a_next_.data();
    double* XB = f_b_next_.data();
    const int32_t* L = links_.data();
    const double* AD = adhesion_.data();

    for (int64_t c = begin; c < end; ++c) {
        double fa[kQ], fb[kQ];
        for (int q = 0; q < kQ; ++q) {
            fa[q] = FA[static_cast<int64_t>(q) * n + c];
            fb[q] = FB[static_cast<int64_t>(q) * n + c];
        }
        const double ra = RA[c], rb = RB[c];

        double pax = 0.0, pay = 0.0, paz = 0.0;
        double pbx = 0.0, pby = 0.0, pbz = 0.0;
        double nax = 0.0, nay = 0.0, naz = 0.0;
        double nbx = 0.0, nby = 0.0, nbz = 0.0;
        for (int q = 1; q < kQ; ++q) {
            pax += fa[q] * kVel[q][0];
            pay += fa[q] * kVel[q][1];
            paz += fa[q] * kVel[q][2];
            pbx += fb[q] * kVel[q][0];
            pby += fb[q] * kVel[q][1];
            pbz += fb[q] * kVel[q][2];
            const int32_t t = L[static_cast<int64_t>(q) * n + c];
            if (t >= 0) {
                const double wra = kWeight[q] * RA[t];
                const double wrb = kWeight[q] * RB[t];
                nax += wra * kVel[q][0];
                nay += wra * kVel[q][1];
                naz += wra * kVel[q][2];
                nbx += wrb * kVel[q][0];
                nby += wrb * kVel[q][1];
                nbz += wrb * kVel[q][2];
            }
        }

        // Force per unit density; psi = rho cancels the local density, so
        // vanishing minority phases stay well defined.
        const double sx = AD[c * 3 + 0], sy = AD[c * 3 + 1], sz = AD[c * 3 + 2];
        const double aax = -g_ab * nbx - g_ads_a * sx;
        const double aay = -g_ab * nby - g_ads_a * sy;
        const double aaz = -g_ab * nbz - g_ads_a * sz;
        const double abx = -g_ab * nax - g_ads_b * sx;
        const double aby = -g_ab * nay - g_ads_b * sy;
        const double abz = -g_ab * naz - g_ads_b * sz;

        const double denom = ra * om_a + rb * om_b;
        const double inv = denom > 1e-30 ? 1.0 / denom : 0.0;
        const double ux = (pax * om_a + pbx * om_b) * inv;
        const double uy = (pay * om_a + pby * om_b) * inv;
        const double uz = (paz * om_a + pbz * om_b) * inv;

        const double uax = ux + tau_a * aax, uay = uy + tau_a * aay,
                     uaz = uz + tau_a * aaz;
        const double ubx = ux + tau_b * abx, uby = uy + tau_b * aby,
                     ubz = uz + tau_b * abz;
        const double uasq = uax * uax + uay * uay + uaz * uaz;
        const double ubsq = ubx * ubx + uby * uby + ubz * ubz;

        for (int q = 0; q < kQ; ++q) {
            const double eua =
                3.0 * (kVel[q][0] * uax + kVel[q][1] * uay + kVel[q][2] * uaz);
            const double eub =
                3.0 * (kVel[q][0] * ubx + kVel[q][1] * uby + kVel[q][2] * ubz);
            const double feqa =
                kWeight[q] * ra * (1.0 + eua + 0.5 * eua * eua - 1.5 * uasq);
            const double feqb =
                kWeight[q] * rb * (1.0 + eub + 0.5 * eub * eub - 1.5 * ubsq);
            const double posta = fa[q] + om_a * (feqa - fa[q]);
            const double postb = fb[q] + om_b * (feqb - fb[q]);
            const int32_t t = L[static_cast<int64_t>(q) * n + c];
            if (t >= 0) {
                XA[static_cast<int64_t>(q) * n + t] = posta;
                XB[static_cast<int64_t>(q) * n + t] = postb;
            } else {
                XA[static_cast<int64_t>(kOpposite[q]) * n + c] = posta;
                XB[static_cast<int64_t>(kOpposite[q]) * n + c] = postb;
            }
        }
    }
}

void Lattice::finish_step() {
    const int64_t n = active_count();
    for (int32_t c : inlet_cells_)
        for (int q = 0; q < kQ; ++q) {
            f_a_next_[static_cast<int64_t>(q) * n + c] = inlet_feq_a_[q];
            f_b_next_[static_cast<int64_t>(q) * n + c] = inlet_feq_b_[q];
        }
    for (int32_t c : outlet_cells_)
        for (int q = 0; q < kQ; ++q) {
            f_a_next_[static_cast<int64_t>(q) * n + c] = outlet_feq_a_[q];
            f_b_next_[static_cast<int64_t>(q) * n + c] = outlet_feq_b_[q];
        }
    f_a_.swap(f_a_next_);
    f_b_.swap(f_b_next_);
    ++step_index_;
}

void Lattice::run_steps(int n_steps, int workers) {
    if (n_steps <= 0) return;
    const int64_t n = active_count();
    workers = std::max(1, workers);

    if (workers == 1) {
        for (int t = 0; t < n_steps; ++t) {
            compute_densities(0, n);
            collide_stream(0, n);
            finish_step();
        }
        return;
    }

    std::barrier<> density_done(workers);
    std::barrier<std::function<void()>> step_done(workers,
                                                  std::function<void()>([this] { finish_step(); }));
    auto body = [&](int w) {
        const int64_t begin = n * w / workers;
        const int64_t end = n * (w + 1) / workers;
        for (int t = 0; t < n_steps; ++t) {
            compute_densities(begin, end);
            density_done.arrive_and_wait();
            collide_stream(begin, end);
            step_done.arrive_and_wait();
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(workers) - 1);
    for (int w = 1; w < workers; ++w) pool.emplace_back(body, w);
    body(0);
    for (auto& th : pool) th.join();
}

double Lattice::cell_rho(const std::vector<double>& f, int64_t c) const {
    const int64_t n = active_count();
    double r = 0.0;
    for (int q = 0; q < kQ; ++q) r += f[static_cast<int64_t>(q) * n + c];
    return r;
}

double Lattice::mass(int component) const {
    const std::vector<double>& f = component == 0 ? f_a_ : f_b_;
    double total = 0.0;
    for (double v : f) total += v;
    return total;
}

double Lattice::saturation() const {
    const int64_t n = active_count();
    int64_t electrolyte = 0;
    for (int64_t c = 0; c < n; ++c)
        if (cell_rho(f_a_, c) > cell_rho(f_b_, c)) ++electrolyte;
    return static_cast<double>(electrolyte) / static_cast<double>(n);
}

std::vector<double> Lattice::density_field(int component) const {
    std::vector<double> out(cell_type_.size(), 0.0);
    const std::vector<double>& f = component == 0 ? f_a_ : f_b_;
    for (int64_t c = 0; c < active_count(); ++c)
        out[static_cast<size_t>(cell_of_[static_cast<size_t>(c)])] = cell_rho(f, c);
    return out;
}

std::array<double, 3> Lattice::velocity(int x, int y, int z) const {
    const size_t vox = static_cast<size_t>(x) +
                       static_cast<size_t>(nx_) *
                           (static_cast<size_t>(y) + static_cast<size_t>(ny_) * z);
    const int32_t c = active_of_[vox];
    if (c < 0) return {0.0, 0.0, 0.0};
    const int64_t n = active_count();
    double px = 0.0, py = 0.0, pz = 0.0, r = 0.0;
    for (int q = 0; q < kQ; ++q) {
        const double m =
            f_a_[static_cast<int64_t>(q) * n + c] + f_b_[static_cast<int64_t>(q) * n + c];
        r += m;
        px += m * kVel[q][0];
        py += m * kVel[q][1];
        pz += m * kVel[q][2];
    }
    if (r <= 0.0) return {0.0, 0.0, 0.0};
    return {px / r, py / r, pz / r};
}

double Lattice::pressure(int x, int y, int z) const {
    const size_t vox = static_cast<size_t>(x) +
                       static_cast<size_t>(nx_) *
                           (static_cast<size_t>(y) + static_cast<size_t>(ny_) * z);
    const int32_t c = active_of_[vox];
    if (c < 0) return 0.0;
    const double ra = cell_rho(f_a_, c), rb = cell_rho(f_b_, c);
    return (ra + rb + params_.g_ab * ra * rb) / 3.0;
}

uint64_t Lattice::state_hash() const {
    Fnv1a64 h;
    const int32_t dims[3] = {nx_, ny_, nz_};
    h.update(dims, sizeof(dims));
    h.update(&step_index_, sizeof(step_index_));
    h.update(f_a_.data(), f_a_.size() * sizeof(double));
    h.update(f_b_.data(), f_b_.size() * sizeof(double));
    return h.digest();
}

void Lattice::check_health() const {
    const int64_t n = active_count();
    for (int64_t c = 0; c < n; ++c) {
        const double ra = cell_rho(f_a_, c), rb = cell_rho(f_b_, c);
        if (!(ra <= 1e6) || !(rb <= 1e6) || std::isnan(ra) || std::isnan(rb))
            throw Error(ErrorCode::NUMERIC_BLOWUP,
                        "density out of range at step " + std::to_string(step_index_));
    }
}

CellType Lattice::cell_type(int x, int y, int z) const {
    return static_cast<CellType>(
        cell_type_[static_cast<size_t>(x) +
                   static_cast<size_t>(nx_) *
                       (static_cast<size_t>(y) + static_cast<size_t>(ny_) * z)]);
}

VoxelImage Lattice::to_image() const {
    VoxelImage img(nx_, ny_, nz_, voxel_size_);
    for (size_t i = 0; i < cell_type_.size(); ++i) {
        switch (static_cast<CellType>(cell_type_[i])) {
            case CellType::SOLID_INTERFACE:
                img.labels[i] = static_cast<uint8_t>(Label::SOLID_INTERFACE);
                break;
            case CellType::SOLID_BULK:
                img.labels[i] = static_cast<uint8_t>(Label::SOLID_BULK);
                break;
            default: {
                const int32_t c = active_of_[i];
                img.labels[i] = cell_rho(f_a_, c) > cell_rho(f_b_, c)
                                    ? static_cast<uint8_t>(Label::ELECTROLYTE)
                                    : static_cast<uint8_t>(Label::GAS);
            }
        }
    }
    return img;
}

void Lattice::save_checkpoint(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::IO_ERROR, "cannot write " + path);
    out.write(kCheckpointMagic, sizeof(kCheckpointMagic));
    const int32_t dims[4] = {nx_, ny_, nz_, level_index_};
    out.write(reinterpret_cast<const char*>(dims), sizeof(dims));
    out.write(reinterpret_cast<const char*>(&step_index_), sizeof(step_index_));
    const uint64_t phash = params_.hash();
    out.write(reinterpret_cast<const char*>(&phash), sizeof(phash));
    const uint64_t n_active = static_cast<uint64_t>(active_count());
    out.write(reinterpret_cast<const char*>(&n_active), sizeof(n_active));
    out.write(reinterpret_cast<const char*>(&inlet_offset_), sizeof(inlet_offset_));
    out.write(reinterpret_cast<const char*>(f_a_.data()),
              static_cast<std::streamsize>(f_a_.size() * sizeof(double)));
    out.write(reinterpret_cast<const char*>(f_b_.data()),
              static_cast<std::streamsize>(f_b_.size() * sizeof(double)));
    if (!out) throw Error(ErrorCode::IO_ERROR, "short write on " + path);
}

void Lattice::load_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IO_ERROR, "cannot read " + path);
    char magic[8];
    in.read(magic, sizeof(magic));
    if (!in || std::memcmp(magic, kCheckpointMagic, sizeof(magic)) != 0)
        throw Error(ErrorCode::BAD_FORMAT, path + " is not a lattice checkpoint");
    int32_t dims[4];
    in.read(reinterpret_cast<char*>(dims), sizeof(dims));
    uint64_t step = 0, phash = 0, n_active = 0;
    double offset = 0.0;
    in.read(reinterpret_cast<char*>(&step), sizeof(step));
    in.read(reinterpret_cast<char*>(&phash), sizeof(phash));
    in.read(reinterpret_cast<char*>(&n_active), sizeof(n_active));
    in.read(reinterpret_cast<char*>(&offset), sizeof(offset));
    if (!in) throw Error(ErrorCode::BAD_FORMAT, path + ": truncated checkpoint header");
    if (dims[0] != nx_ || dims[1] != ny_ || dims[2] != nz_)
        throw Error(ErrorCode::BAD_FORMAT, path + ": checkpoint dimension mismatch");
    if (phash != params_.hash())
        throw Error(ErrorCode::BAD_FORMAT, path + ": checkpoint parameter hash mismatch");
    if (n_active != static_cast<uint64_t>(active_count()))
        throw Error(ErrorCode::BAD_FORMAT, path + ": checkpoint cell count mismatch");
    in.read(reinterpret_cast<char*>(f_a_.data()),
            static_cast<std::streamsize>(f_a_.size() * sizeof(double)));
    in.read(reinterpret_cast<char*>(f_b_.data()),
            static_cast<std::streamsize>(f_b_.size() * sizeof(double)));
    if (!in || in.gcount() != static_cast<std::streamsize>(f_b_.size() * sizeof(double)))
        throw Error(ErrorCode::BAD_FORMAT, path + ": truncated checkpoint payload");
    step_index_ = step;
    level_index_ = dims[3];
    set_inlet_offset(offset);
}

Lattice init_lattice(const VoxelImage& img, const ShanChenParams& params, Face inlet,
                     Face outlet) {
    LatticeOptions options;
    options.with_reservoirs = true;
    options.inlet = inlet;
    options.outlet = outlet;
    return Lattice(img, params, options);
}

}  // namespace porefill::lbm
