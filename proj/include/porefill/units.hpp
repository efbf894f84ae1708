// Lattice <-> physical unit conversion anchored on the volume-weighted median
// pore diameter and the measured lattice surface tension, plus the
// one-parameter pressure-axis calibration of the pore-network model against a
// lattice Boltzmann reference curve.

#pragma once

#include <string>

#include "porefill/curve.hpp"

namespace porefill::unitbridge {

struct UnitSystem {
    double dx = 1.0;              // m per lattice length
    double dt = 1.0;              // s per lattice step
    double pressure_scale = 1.0;  // Pa per lattice pressure unit
};

// dx from the d50 anchor, dt from kinematic viscosity matching, pressure
// scale from the surface-tension ratio (Laplace-consistent).
UnitSystem build_units(double d50_phys_um, double d50_lat, double sigma_phys,
                       double sigma_lat, double nu_phys, double nu_lat);

// Pressure axis rescaled; saturation values pass through untouched.
PressureSaturationCurve convert_curve(const PressureSaturationCurve& lattice_curve,
                                      const UnitSystem& units);

struct Calibration {
    double pressure_scale_correction = 1.0;
    double residual = 0.0;  // interval-weighted RMS saturation mismatch
};

// Fits a single multiplicative pressure correction k in [1e-2, 1e2] that
// minimizes the RMS saturation mismatch between the two staircases on their
// overlapping pressure support (log-spaced probing plus golden-section
// refinement). Requires the saturation ranges to overlap by at least 0.3.
Calibration calibrate_pnm(const PressureSaturationCurve& lbm_curve,
                          const PressureSaturationCurve& pnm_curve);

// Objective used by calibrate_pnm, exposed for the optimality check.
double calibration_objective(const PressureSaturationCurve& lbm_curve,
                             const PressureSaturationCurve& pnm_curve, double k);

void write_calibration_report(const Calibration& calib, const std::string& path,
                              const std::string& lbm_file, const std::string& pnm_file);

}  // namespace porefill::unitbridge
