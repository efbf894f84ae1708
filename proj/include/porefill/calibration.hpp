// Parameter calibration runs on synthetic geometries: immiscibility probe,
// Laplace-law surface tension measurement, and the adhesion-to-contact-angle
// map used to select wetting parameters.

#pragma once

#include <vector>

#include "porefill/lattice.hpp"

namespace porefill::lbm {

// Seeds a uniform two-component mix with small random density perturbations
// in a periodic box and reports max(rho_a)/min(rho_a) when it exceeds 10 or
// the budget runs out. Values above 10 indicate a demixing coupling.
double check_separation(const ShanChenParams& params, uint64_t seed = 1234,
                        int box = 16, int budget = 20000);

struct LaplaceResult {
    double sigma_lat = 0.0;  // delta_p * measured radius / 2
    double delta_p = 0.0;    // inside minus outside equation-of-state pressure
    double radius = 0.0;     // from the equilibrated droplet volume
    int steps = 0;
};

// Equilibrates one droplet in a periodic (4R)^3 box and applies the Laplace
// law. Throws NOT_CONVERGED when the pressure jump does not stabilize or
// vanishes (no interface).
LaplaceResult laplace_test(double radius, const ShanChenParams& params,
                           int max_steps = 30000, int workers = 1);

struct LaplaceCalibration {
    double sigma_lat = 0.0;  // half the slope of delta_p versus 1/R
    double r_squared = 0.0;
    double max_sigma_spread = 0.0;  // worst per-droplet deviation from the mean
    std::vector<LaplaceResult> droplets;
};

// Laplace runs over >= 3 radii plus the linear delta_p vs 1/R fit.
LaplaceCalibration laplace_calibration(const std::vector<double>& radii,
                                       const ShanChenParams& params,
                                       int max_steps = 30000, int workers = 1);

struct ContactAnglePoint {
    double g_ads_a = 0.0;
    double g_ads_b = 0.0;
    double theta_deg = 0.0;         // sphere-cap fit to the iso-density surface
    double theta_oracle_deg = 0.0;  // cap height/chord estimate 2*atan(2h/c)
    int steps = 0;
};

// Equilibrates a sessile droplet on a flat wall and measures the contact
// angle two independent ways.
ContactAnglePoint measure_contact_angle(const ShanChenParams& params,
                                        int max_steps = 20000);

// Sweeps g_ads_a with g_ads_b = -g_ads_a; the resulting map is monotone over
// the usable range.
std::vector<ContactAnglePoint> contact_angle_calibration(
    const std::vector<double>& g_ads_a_values, ShanChenParams params,
    int max_steps = 20000);

}  // namespace porefill::lbm
