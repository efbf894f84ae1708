#include "porefill/calibration.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>

namespace porefill::lbm {

using voxelgrid::classify_solid;

namespace {

VoxelImage open_periodic_box(int nx, int ny, int nz) {
    return VoxelImage(nx, ny, nz, 1.0);  // all pore
}

LatticeOptions periodic_options(bool periodic_z) {
    LatticeOptions opt;
    opt.periodic = {true, true, periodic_z};
    return opt;
}

}  // namespace

double check_separation(const ShanChenParams& params, uint64_t seed, int box,
                        int budget) {
    const VoxelImage img = open_periodic_box(box, box, box);
    Lattice lat(img, params, periodic_options(true));

    std::mt19937_64 rng(seed);
    for (int z = 0; z < box; ++z)
        for (int y = 0; y < box; ++y)
            for (int x = 0; x < box; ++x) {
                const double ja = 0.02 * (uniform01(rng) - 0.5);
                const double jb = 0.02 * (uniform01(rng) - 0.5);
                lat.set_density(0, x, y, z, 0.5 * params.rho_init_a * (1.0 + ja));
                lat.set_density(1, x, y, z, 0.5 * params.rho_init_b * (1.0 + jb));
            }

    double ratio = 1.0;
    for (int done = 0; done < budget; done += 500) {
        lat.run_steps(std::min(500, budget - done));
        lat.check_health();
        const auto rho = lat.density_field(0);
        double lo = rho[0], hi = rho[0];
        for (double v : rho) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        ratio = hi / std::max(lo, 1e-12);
        if (ratio > 10.0) break;
    }
    return ratio;
}

LaplaceResult laplace_test(double radius, const ShanChenParams& params, int max_steps,
                           int workers) {
    if (!(radius > 2.0))
        throw Error(ErrorCode::CONFIG_ERROR, "droplet radius must exceed 2 lattice units");
    const int box = static_cast<int>(std::lround(4.0 * radius));
    const VoxelImage img = open_periodic_box(box, box, box);
    Lattice lat(img, params, periodic_options(true));

    const double cx = 0.5 * box;
    for (int z = 0; z < box; ++z)
        for (int y = 0; y < box; ++y)
            for (int x = 0; x < box; ++x) {
                const double dx = x + 0.5 - cx, dy = y + 0.5 - cx, dz = z + 0.5 - cx;
                const bool inside = dx * dx + dy * dy + dz * dz <= radius * radius;
                lat.set_density(0, x, y, z,
                                inside ? params.rho_init_a : params.rho_minor);
                lat.set_density(1, x, y, z,
                                inside ? params.rho_minor : params.rho_init_b);
            }

    auto pressure_jump = [&]() {
        const double r_in = 0.5 * radius, r_out = 1.6 * radius;
        double p_in = 0.0, p_out = 0.0;
        int64_t n_in = 0, n_out = 0;
        for (int z = 0; z < box; ++z)
            for (int y = 0; y < box; ++y)
                for (int x = 0; x < box; ++x) {
                    const double dx = x + 0.5 - cx, dy = y + 0.5 - cx, dz = z + 0.5 - cx;
                    const double rr = dx * dx + dy * dy + dz * dz;
                    if (rr <= r_in * r_in) {
                        p_in += lat.pressure(x, y, z);
                        ++n_in;
                    } else if (rr >= r_out * r_out) {
                        p_out += lat.pressure(x, y, z);
                        ++n_out;
                    }
                }
        return p_in / static_cast<double>(n_in) - p_out / static_cast<double>(n_out);
    };

    double dp = pressure_jump();
    int stable = 0, steps = 0;
    while (steps < max_steps) {
        lat.run_steps(500, workers);
        steps += 500;
        lat.check_health();
        const double next = pressure_jump();
        const double change = std::abs(next - dp) / std::max(std::abs(next), 1e-12);
        dp = next;
        if (steps >= 2000 && change < 2e-4) {
            if (++stable >= 2) break;
        } else {
            stable = 0;
        }
    }
    if (stable < 2)
        throw Error(ErrorCode::NOT_CONVERGED,
                    "pressure jump did not stabilize within " +
                        std::to_string(max_steps) + " steps");
    if (std::abs(dp) < 1e-6)
        throw Error(ErrorCode::NOT_CONVERGED,
                    "vanishing pressure jump, no stable interface at this coupling");

    int64_t droplet_cells = 0;
    const auto rho_a = lat.density_field(0);
    const auto rho_b = lat.density_field(1);
    for (size_t i = 0; i < rho_a.size(); ++i)
        if (rho_a[i] > rho_b[i]) ++droplet_cells;

    LaplaceResult res;
    res.radius = std::cbrt(3.0 * static_cast<double>(droplet_cells) / (4.0 * M_PI));
    res.delta_p = dp;
    res.sigma_lat = 0.5 * dp * res.radius;
    res.steps = steps;
    return res;
}

LaplaceCalibration laplace_calibration(const std::vector<double>& radii,
                                       const ShanChenParams& params, int max_steps,
                                       int workers) {
    if (radii.size() < 3)
        throw Error(ErrorCode::CONFIG_ERROR,
                    "surface tension fit needs at least 3 droplet radii");

    LaplaceCalibration cal;
    for (double r : radii)
        cal.droplets.push_back(laplace_test(r, params, max_steps, workers));

    const auto n = static_cast<Eigen::Index>(cal.droplets.size());
    Eigen::MatrixXd a(n, 2);
    Eigen::VectorXd y(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        a(i, 0) = 1.0 / cal.droplets[static_cast<size_t>(i)].radius;
        a(i, 1) = 1.0;
        y(i) = cal.droplets[static_cast<size_t>(i)].delta_p;
    }
    const Eigen::Vector2d fit = a.colPivHouseholderQr().solve(y);
    cal.sigma_lat = 0.5 * fit(0);

    const double mean = y.mean();
    const double ss_tot = (y.array() - mean).matrix().squaredNorm();
    const double ss_res = (y - a * fit).squaredNorm();
    cal.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;

    double sigma_mean = 0.0;
    for (const auto& d : cal.droplets) sigma_mean += d.sigma_lat;
    sigma_mean /= static_cast<double>(cal.droplets.size());
    for (const auto& d : cal.droplets)
        cal.max_sigma_spread = std::max(cal.max_sigma_spread,
                                        std::abs(d.sigma_lat - sigma_mean) /
                                            std::abs(sigma_mean));
    return cal;
}

namespace {

struct DropletField {
    int w = 0, h = 0;
    std::vector<double> rho;  // component a, full grid
    const Lattice* lat = nullptr;
    double iso = 0.0;
    double z_wall = 2.0;  // half-way wall plane above the two solid layers
};

// Iso-density crossing points on lattice edges, cell-center coordinates.
std::vector<std::array<double, 3>> iso_points(const DropletField& f) {
    std::vector<std::array<double, 3>> pts;
    auto fluid = [&](int x, int y, int z) {
        return f.lat->cell_type(x, y, z) == CellType::FLUID;
    };
    auto rho_at = [&](int x, int y, int z) {
        return f.rho[static_cast<size_t>(x) +
                     static_cast<size_t>(f.w) *
                         (static_cast<size_t>(y) + static_cast<size_t>(f.w) * z)];
    };
    for (int z = 2; z < f.h; ++z)
        for (int y = 0; y < f.w; ++y)
            for (int x = 0; x < f.w; ++x) {
                if (!fluid(x, y, z)) continue;
                const double r0 = rho_at(x, y, z) - f.iso;
                if (x + 1 < f.w && fluid(x + 1, y, z)) {
                    const double r1 = rho_at(x + 1, y, z) - f.iso;
                    if (r0 * r1 < 0.0)
                        pts.push_back({x + 0.5 + r0 / (r0 - r1), y + 0.5, z + 0.5});
                }
                if (y + 1 < f.w && fluid(x, y + 1, z)) {
                    const double r1 = rho_at(x, y + 1, z) - f.iso;
                    if (r0 * r1 < 0.0)
                        pts.push_back({x + 0.5, y + 0.5 + r0 / (r0 - r1), z + 0.5});
                }
                if (z + 1 < f.h && fluid(x, y, z + 1)) {
                    const double r1 = rho_at(x, y, z + 1) - f.iso;
                    if (r0 * r1 < 0.0)
                        pts.push_back({x + 0.5, y + 0.5, z + 0.5 + r0 / (r0 - r1)});
                }
            }
    return pts;
}

// Least-squares sphere through the cap points, excluding the near-wall film.
double sphere_fit_angle(const DropletField& f) {
    std::vector<std::array<double, 3>> pts;
    for (const auto& p : iso_points(f))
        if (p[2] >= f.z_wall + 1.5) pts.push_back(p);
    if (pts.size() < 30)
        throw Error(ErrorCode::NOT_CONVERGED, "too few interface points for a cap fit");

    const auto n = static_cast<Eigen::Index>(pts.size());
    Eigen::MatrixXd a(n, 4);
    Eigen::VectorXd y(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& p = pts[static_cast<size_t>(i)];
        a(i, 0) = 2.0 * p[0];
        a(i, 1) = 2.0 * p[1];
        a(i, 2) = 2.0 * p[2];
        a(i, 3) = 1.0;
        y(i) = p[0] * p[0] + p[1] * p[1] + p[2] * p[2];
    }
    const Eigen::Vector4d fit = a.colPivHouseholderQr().solve(y);
    const double r =
        std::sqrt(fit(3) + fit(0) * fit(0) + fit(1) * fit(1) + fit(2) * fit(2));
    const double cosine = std::clamp((f.z_wall - fit(2)) / r, -1.0, 1.0);
    return std::acos(cosine) * 180.0 / M_PI;
}

// Independent estimate from cap height and the contact chord extrapolated to
// the wall plane: theta = 2*atan(2h/c).
double oracle_angle(const DropletField& f) {
    const auto pts = iso_points(f);

    // Cap height from the topmost z-crossing near the droplet axis.
    const double cx = 0.5 * f.w;
    double top = -1.0;
    for (const auto& p : pts) {
        if (std::abs(p[0] - cx) <= 1.0 && std::abs(p[1] - cx) <= 1.0)
            top = std::max(top, p[2]);
    }
    if (top < 0.0)
        throw Error(ErrorCode::NOT_CONVERGED, "no interface crossing above the droplet");
    const double h = top - f.z_wall;

    // Chord width from x-crossings in the two bottom fluid rows.
    auto width_at = [&](int z) {
        double lo = 1e30, hi = -1e30;
        for (const auto& p : pts) {
            if (std::abs(p[2] - (z + 0.5)) > 0.25) continue;
            if (std::abs(p[1] - cx) > 1.0) continue;
            lo = std::min(lo, p[0]);
            hi = std::max(hi, p[0]);
        }
        if (hi <= lo)
            throw Error(ErrorCode::NOT_CONVERGED, "no contact chord at the wall");
        return hi - lo;
    };
    const double w2 = width_at(2), w3 = width_at(3);
    const double chord = w2 + 0.5 * (w2 - w3);  // extrapolated to the wall plane
    return 2.0 * std::atan2(2.0 * h, chord) * 180.0 / M_PI;
}

}  // namespace

ContactAnglePoint measure_contact_angle(const ShanChenParams& params, int max_steps) {
    const int w = 44, h = 30;
    VoxelImage img(w, w, h, 1.0);
    for (int z = 0; z < 2; ++z)
        for (int y = 0; y < w; ++y)
            for (int x = 0; x < w; ++x)
                img.at(x, y, z) = voxelgrid::SOLID_BULK;
    img = classify_solid(img);

    Lattice lat(img, params, periodic_options(false));
    const double r0 = 11.0, cx = 0.5 * w, cz = 2.0;
    for (int z = 2; z < h; ++z)
        for (int y = 0; y < w; ++y)
            for (int x = 0; x < w; ++x) {
                const double dx = x + 0.5 - cx, dy = y + 0.5 - cx, dz = z + 0.5 - cz;
                const bool inside = dx * dx + dy * dy + dz * dz <= r0 * r0;
                lat.set_density(0, x, y, z, inside ? params.rho_init_a : params.rho_minor);
                lat.set_density(1, x, y, z, inside ? params.rho_minor : params.rho_init_b);
            }

    DropletField field;
    field.w = w;
    field.h = h;
    field.lat = &lat;

    auto measure = [&]() {
        field.rho = lat.density_field(0);
        double lo = 1e30, hi = -1e30;
        for (int z = 2; z < h; ++z)
            for (int y = 0; y < w; ++y)
                for (int x = 0; x < w; ++x) {
                    const double v = field.rho[img.index(x, y, z)];
                    lo = std::min(lo, v);
                    hi = std::max(hi, v);
                }
        field.iso = 0.5 * (lo + hi);
        return sphere_fit_angle(field);
    };

    double theta = 180.0;
    int stable = 0, steps = 0;
    while (steps < max_steps) {
        lat.run_steps(500);
        steps += 500;
        lat.check_health();
        const double next = measure();
        if (steps >= 3000 && std::abs(next - theta) < 0.15) {
            theta = next;
            if (++stable >= 2) break;
        } else {
            theta = next;
            stable = 0;
        }
    }
    if (stable < 2)
        throw Error(ErrorCode::NOT_CONVERGED,
                    "contact angle did not stabilize within " +
                        std::to_string(max_steps) + " steps");

    ContactAnglePoint pt;
    pt.g_ads_a = params.g_ads_a;
    pt.g_ads_b = params.g_ads_b;
    pt.theta_deg = theta;
    pt.theta_oracle_deg = oracle_angle(field);
    pt.steps = steps;
    return pt;
}

std::vector<ContactAnglePoint> contact_angle_calibration(
    const std::vector<double>& g_ads_a_values, ShanChenParams params, int max_steps) {
    std::vector<ContactAnglePoint> sweep;
    for (double g : g_ads_a_values) {
        params.g_ads_a = g;
        params.g_ads_b = -g;
        sweep.push_back(measure_contact_angle(params, max_steps));
    }
    return sweep;
}

}  // namespace porefill::lbm
