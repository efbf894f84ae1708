#include "porefill/transport.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <vector>

#include "porefill/core.hpp"

namespace porefill::transport {

using voxelgrid::is_fluid;
using voxelgrid::is_solid;
using voxelgrid::kFaceNeighbors;
using voxelgrid::Label;

namespace {

struct LaplaceSystem {
    std::vector<int32_t> cell_of;       // unknown -> voxel index
    std::vector<int32_t> unknown_of;    // voxel index -> unknown or -1
    std::vector<int32_t> neighbors;     // 6 per unknown, -1 where absent
    Eigen::VectorXd diag;
    Eigen::VectorXd rhs;
    std::vector<int32_t> inlet_cells;   // unknown ids on the axis-min face
    std::vector<int32_t> outlet_cells;  // unknown ids on the axis-max face
};

// Unknowns are the conducting voxels face-connected to the axis-min face;
// everything else carries no flux and would only make the matrix singular.
LaplaceSystem build_system(const VoxelImage& img, LabelSet conducting, int axis) {
    const int64_t n = static_cast<int64_t>(img.nx) * img.ny * img.nz;
    const int dims[3] = {img.nx, img.ny, img.nz};

    LaplaceSystem sys;
    sys.unknown_of.assign(static_cast<size_t>(n), -1);

    std::vector<int32_t> stack;
    auto push_if_new = [&](int64_t idx) {
        if (conducting.contains(img.labels[static_cast<size_t>(idx)]) &&
            sys.unknown_of[static_cast<size_t>(idx)] == -1) {
            sys.unknown_of[static_cast<size_t>(idx)] =
                static_cast<int32_t>(sys.cell_of.size());
            sys.cell_of.push_back(static_cast<int32_t>(idx));
            stack.push_back(static_cast<int32_t>(idx));
        }
    };

    for (int z = 0; z < img.nz; ++z)
        for (int y = 0; y < img.ny; ++y)
            for (int x = 0; x < img.nx; ++x) {
                const int c[3] = {x, y, z};
                if (c[axis] == 0) push_if_new(img.index(x, y, z));
            }
    while (!stack.empty()) {
        const int32_t idx = stack.back();
        stack.pop_back();
        const auto [x, y, z] = img.coords(idx);
        for (const auto& d : kFaceNeighbors) {
            const int nx2 = x + d[0], ny2 = y + d[1], nz2 = z + d[2];
            if (nx2 < 0 || ny2 < 0 || nz2 < 0 || nx2 >= img.nx || ny2 >= img.ny ||
                nz2 >= img.nz)
                continue;
            push_if_new(img.index(nx2, ny2, nz2));
        }
    }

    const auto m = static_cast<Eigen::Index>(sys.cell_of.size());
    bool spans = false;
    sys.neighbors.assign(sys.cell_of.size() * 6, -1);
    sys.diag = Eigen::VectorXd::Zero(m);
    sys.rhs = Eigen::VectorXd::Zero(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        const auto [x, y, z] = img.coords(sys.cell_of[static_cast<size_t>(i)]);
        const int c[3] = {x, y, z};
        double diag = 0.0;
        for (int q = 0; q < 6; ++q) {
            const auto& d = kFaceNeighbors[q];
            const int nx2 = x + d[0], ny2 = y + d[1], nz2 = z + d[2];
            if (nx2 < 0 || ny2 < 0 || nz2 < 0 || nx2 >= img.nx || ny2 >= img.ny ||
                nz2 >= img.nz)
                continue;
            const int32_t u = sys.unknown_of[img.index(nx2, ny2, nz2)];
            if (u >= 0) {
                sys.neighbors[static_cast<size_t>(i) * 6 + q] = u;
                diag += 1.0;
            }
        }
        if (c[axis] == 0) {
            diag += 2.0;
            sys.rhs[i] = 2.0;
            sys.inlet_cells.push_back(static_cast<int32_t>(i));
        }
        if (c[axis] == dims[axis] - 1) {
            diag += 2.0;
            sys.outlet_cells.push_back(static_cast<int32_t>(i));
            spans = true;
        }
        sys.diag[i] = diag;
    }

    if (!spans)
        throw Error(ErrorCode::NONPERCOLATING,
                    std::string("conducting phase does not span axis ") +
                        "xyz"[static_cast<size_t>(axis)]);
    return sys;
}

void apply_laplacian(const LaplaceSystem& sys, const Eigen::VectorXd& x,
                     Eigen::VectorXd& y) {
    const auto m = x.size();
    for (Eigen::Index i = 0; i < m; ++i) {
        double acc = sys.diag[i] * x[i];
        const int32_t* nb = sys.neighbors.data() + static_cast<size_t>(i) * 6;
        for (int q = 0; q < 6; ++q)
            if (nb[q] >= 0) acc -= x[nb[q]];
        y[i] = acc;
    }
}

}  // namespace

TransportResult effective_diffusivity(const VoxelImage& img, LabelSet conducting,
                                      int axis, double tol, int max_iter) {
    if (axis < 0 || axis > 2)
        throw Error(ErrorCode::BAD_GEOMETRY, "transport axis must be 0, 1 or 2");

    LaplaceSystem sys = build_system(img, conducting, axis);
    const auto m = sys.diag.size();
    if (max_iter <= 0)
        max_iter = static_cast<int>(10.0 * std::pow(static_cast<double>(m), 2.0 / 3.0)) + 50;

    Eigen::VectorXd x = Eigen::VectorXd::Zero(m);
    Eigen::VectorXd r = sys.rhs;
    Eigen::VectorXd z = r.cwiseQuotient(sys.diag);
    Eigen::VectorXd p = z;
    Eigen::VectorXd ap(m);
    double rz = r.dot(z);
    const double target = tol * sys.rhs.norm();

    int iterations = 0;
    while (r.norm() > target) {
        if (iterations >= max_iter)
            throw Error(ErrorCode::NOT_CONVERGED,
                        "diffusion solve stalled after " + std::to_string(iterations) +
                            " iterations");
        apply_laplacian(sys, p, ap);
        const double alpha = rz / p.dot(ap);
        x += alpha * p;
        r -= alpha * ap;
        z = r.cwiseQuotient(sys.diag);
        const double rz_next = r.dot(z);
        p = z + (rz_next / rz) * p;
        rz = rz_next;
        ++iterations;
    }

    TransportResult res;
    res.axis = axis;
    res.iterations = iterations;
    for (int32_t i : sys.inlet_cells) res.flux_in += 2.0 * (1.0 - x[i]);
    for (int32_t i : sys.outlet_cells) res.flux_out += 2.0 * x[i];

    const int dims[3] = {img.nx, img.ny, img.nz};
    const double length = dims[axis];
    const double area = static_cast<double>(img.nx) * img.ny * img.nz / dims[axis];
    res.deff_ratio = 0.5 * (res.flux_in + res.flux_out) * length / area;

    int64_t conducting_count = 0;
    for (uint8_t lab : img.labels)
        if (conducting.contains(lab)) ++conducting_count;
    res.conducting_fraction = static_cast<double>(conducting_count) /
                              (static_cast<double>(img.nx) * img.ny * img.nz);
    res.tortuosity = res.conducting_fraction / res.deff_ratio;
    return res;
}

EntrapmentReport entrapment_penalty(const VoxelImage& before, const VoxelImage& after,
                                    int axis) {
    if (before.nx != after.nx || before.ny != after.ny || before.nz != after.nz)
        throw Error(ErrorCode::BAD_GEOMETRY,
                    "entrapment report needs images of identical dimensions");

    EntrapmentReport rep;
    rep.before = effective_diffusivity(
        before, LabelSet{Label::PORE, Label::ELECTROLYTE, Label::GAS}, axis);
    rep.after = effective_diffusivity(after, LabelSet{Label::ELECTROLYTE}, axis);
    rep.delta_deff_ratio = rep.before.deff_ratio - rep.after.deff_ratio;
    rep.delta_tau = rep.after.tortuosity - rep.before.tortuosity;

    int64_t electrolyte = 0, open_cells = 0;
    for (uint8_t lab : after.labels) {
        if (!is_solid(lab)) ++open_cells;
        if (lab == Label::ELECTROLYTE) ++electrolyte;
    }
    rep.saturation =
        open_cells > 0 ? static_cast<double>(electrolyte) / static_cast<double>(open_cells)
                       : 0.0;
    rep.wetted_solid_fraction = wetted_solid_fraction(after);
    return rep;
}

double wetted_solid_fraction(const VoxelImage& img) {
    int64_t wetted = 0, exposed = 0;
    for (int z = 0; z < img.nz; ++z)
        for (int y = 0; y < img.ny; ++y)
            for (int x = 0; x < img.nx; ++x) {
                if (img.labels[img.index(x, y, z)] != Label::SOLID_INTERFACE) continue;
                bool touches_fluid = false, touches_electrolyte = false;
                for (const auto& d : kFaceNeighbors) {
                    const int nx2 = x + d[0], ny2 = y + d[1], nz2 = z + d[2];
                    if (!img.in_bounds(nx2, ny2, nz2)) continue;
                    const uint8_t lab = img.labels[img.index(nx2, ny2, nz2)];
                    if (is_fluid(lab)) touches_fluid = true;
                    if (lab == Label::ELECTROLYTE) touches_electrolyte = true;
                }
                if (touches_fluid) ++exposed;
                if (touches_electrolyte) ++wetted;
            }
    return exposed > 0 ? static_cast<double>(wetted) / static_cast<double>(exposed) : 0.0;
}

void append_feedback_row(const std::string& path, const std::string& structure_hash,
                         double theta_deg, double sigma, const EntrapmentReport& report) {
    const bool fresh = !std::filesystem::exists(path);
    std::ofstream out(path, std::ios::binary | std::ios::app);
    if (!out) throw Error(ErrorCode::IO_ERROR, "cannot write " + path);
    if (fresh)
        out << "structure_hash,theta_deg,sigma,saturation,deff_ratio_before,"
               "deff_ratio_after,tau_before,tau_after,wetted_solid_fraction\n";
    out << structure_hash << ',' << format_double(theta_deg) << ',' << format_double(sigma)
        << ',' << format_double(report.saturation) << ','
        << format_double(report.before.deff_ratio) << ','
        << format_double(report.after.deff_ratio) << ','
        << format_double(report.before.tortuosity) << ','
        << format_double(report.after.tortuosity) << ','
        << format_double(report.wetted_solid_fraction) << "\n";
    if (!out) throw Error(ErrorCode::IO_ERROR, "short write on " + path);
}

}  // namespace porefill::transport
