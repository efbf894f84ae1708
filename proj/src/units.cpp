#include "porefill/units.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <vector>

#include "porefill/core.hpp"

namespace porefill::unitbridge {

UnitSystem build_units(double d50_phys_um, double d50_lat, double sigma_phys,
                       double sigma_lat, double nu_phys, double nu_lat) {
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0) || !std::isfinite(v))
            throw Error(ErrorCode::NONPOSITIVE_INPUT,
                        std::string("unit bridge requires positive ") + name);
    };
    positive(d50_phys_um, "physical d50");
    positive(d50_lat, "lattice d50");
    positive(sigma_phys, "physical surface tension");
    positive(sigma_lat, "lattice surface tension");
    positive(nu_phys, "physical viscosity");
    positive(nu_lat, "lattice viscosity");

    UnitSystem u;
    u.dx = d50_phys_um * 1e-6 / d50_lat;
    u.dt = nu_lat * u.dx * u.dx / nu_phys;
    u.pressure_scale = sigma_phys / (sigma_lat * u.dx);
    return u;
}

PressureSaturationCurve convert_curve(const PressureSaturationCurve& lattice_curve,
                                      const UnitSystem& units) {
    PressureSaturationCurve out = lattice_curve;
    for (auto& pt : out.points) pt.pressure *= units.pressure_scale;
    return out;
}

double calibration_objective(const PressureSaturationCurve& lbm_curve,
                             const PressureSaturationCurve& pnm_curve, double k) {
    const double lo = std::max(lbm_curve.min_pressure(), k * pnm_curve.min_pressure());
    const double hi = std::min(lbm_curve.max_pressure(), k * pnm_curve.max_pressure());
    if (!(hi > lo)) {
        if (hi == lo)
            return std::abs(lbm_curve.saturation_at(lo) - pnm_curve.saturation_at(lo / k));
        return std::numeric_limits<double>::infinity();
    }

    std::vector<double> grid;
    grid.reserve(lbm_curve.points.size() + pnm_curve.points.size() + 2);
    grid.push_back(lo);
    grid.push_back(hi);
    for (const auto& pt : lbm_curve.points)
        if (pt.pressure > lo && pt.pressure < hi) grid.push_back(pt.pressure);
    for (const auto& pt : pnm_curve.points) {
        const double p = k * pt.pressure;
        if (p > lo && p < hi) grid.push_back(p);
    }
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

    // Both curves are staircases, so the squared mismatch is constant between
    // consecutive grid points and the integral is exact.
    double acc = 0.0;
    for (size_t i = 0; i + 1 < grid.size(); ++i) {
        const double width = grid[i + 1] - grid[i];
        const double mid = 0.5 * (grid[i] + grid[i + 1]);
        const double d = lbm_curve.saturation_at(mid) - pnm_curve.saturation_at(mid / k);
        acc += d * d * width;
    }
    return std::sqrt(acc / (hi - lo));
}

Calibration calibrate_pnm(const PressureSaturationCurve& lbm_curve,
                          const PressureSaturationCurve& pnm_curve) {
    if (lbm_curve.points.empty() || pnm_curve.points.empty())
        throw Error(ErrorCode::NO_OVERLAP, "calibration requires two non-empty curves");
    const double sat_overlap =
        std::min(lbm_curve.max_saturation(), pnm_curve.max_saturation()) -
        std::max(lbm_curve.min_saturation(), pnm_curve.min_saturation());
    if (sat_overlap < 0.3)
        throw Error(ErrorCode::NO_OVERLAP,
                    "saturation ranges overlap by " + format_double(sat_overlap) +
                        ", need at least 0.3");

    constexpr int kProbes = 64;
    constexpr double kLogLo = -2.0;
    constexpr double kLogHi = 2.0;

    double best_k = 1.0;
    double best_f = std::numeric_limits<double>::infinity();
    int best_i = 0;
    auto consider = [&](double k, double f, int i = -1) {
        if (f < best_f) {
            best_f = f;
            best_k = k;
            if (i >= 0) best_i = i;
        }
    };

    for (int i = 0; i < kProbes; ++i) {
        const double lk = kLogLo + (kLogHi - kLogLo) * i / (kProbes - 1);
        const double k = std::pow(10.0, lk);
        consider(k, calibration_objective(lbm_curve, pnm_curve, k), i);
    }

    // Golden-section refinement in log space between the probes bracketing
    // the best one.
    double a = kLogLo + (kLogHi - kLogLo) * std::max(best_i - 1, 0) / (kProbes - 1);
    double b = kLogLo + (kLogHi - kLogLo) * std::min(best_i + 1, kProbes - 1) / (kProbes - 1);
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = calibration_objective(lbm_curve, pnm_curve, std::pow(10.0, c));
    double fd = calibration_objective(lbm_curve, pnm_curve, std::pow(10.0, d));
    consider(std::pow(10.0, c), fc);
    consider(std::pow(10.0, d), fd);
    for (int it = 0; it < 120 && b - a > 1e-12; ++it) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = calibration_objective(lbm_curve, pnm_curve, std::pow(10.0, c));
            consider(std::pow(10.0, c), fc);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = calibration_objective(lbm_curve, pnm_curve, std::pow(10.0, d));
            consider(std::pow(10.0, d), fd);
        }
    }

    Calibration calib;
    calib.pressure_scale_correction = best_k;
    calib.residual = best_f;
    return calib;
}

void write_calibration_report(const Calibration& calib, const std::string& path,
                              const std::string& lbm_file, const std::string& pnm_file) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::IO_ERROR, "cannot write " + path);
    out << "k=" << format_double(calib.pressure_scale_correction) << "\n";
    out << "residual=" << format_double(calib.residual) << "\n";
    out << "lbm_curve_hash=" << hex64(hash_file(lbm_file)) << "\n";
    out << "pnm_curve_hash=" << hex64(hash_file(pnm_file)) << "\n";
    if (!out) throw Error(ErrorCode::IO_ERROR, "short write on " + path);
}

}  // namespace porefill::unitbridge
