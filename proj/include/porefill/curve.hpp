// Pressure-saturation curve: the exchange currency between the percolation
// model, the lattice Boltzmann runs and the calibration step. Curves are
// right-continuous staircases anchored at their sample points.

#pragma once

#include <string>
#include <vector>

#include "porefill/core.hpp"

namespace porefill {

struct CurvePoint {
    double pressure = 0.0;
    double saturation = 0.0;
};

struct PressureSaturationCurve {
    std::vector<CurvePoint> points;  // ascending pressure

    bool empty() const { return points.empty(); }
    // Step interpolation: saturation of the last point with pressure <= p,
    // 0 before the first point.
    double saturation_at(double p) const;
    double min_pressure() const;
    double max_pressure() const;
    double min_saturation() const;
    double max_saturation() const;
};

// CSV with mandatory header "pressure_pa,saturation", ascending pressure.
void write_curve_csv(const PressureSaturationCurve& curve, const std::string& path);
PressureSaturationCurve read_curve_csv(const std::string& path);

}  // namespace porefill
