// Quasi-static invasion percolation on a pore network. Pore bodies carry all
// volume; throats gate invasion through the Washburn entry pressure of a
// cylindrical constriction. Optional defender-phase trapping freezes gas
// clusters that lose their path to the outlet.

#pragma once

#include <string>
#include <vector>

#include "porefill/curve.hpp"
#include "porefill/network.hpp"

namespace porefill::pnmperc {

using netextract::PoreNetwork;

struct FluidPair {
    double surface_tension = 0.072;   // N/m
    double contact_angle_deg = 60.0;  // measured through the invading phase
    std::string invading = "electrolyte";
    std::string defending = "gas";
};

// Washburn entry pressure -4*sigma*cos(theta)/d for a cylindrical throat.
// Negative for a wetting invader, zero at 90 degrees.
double entry_pressure(double throat_diameter_um, const FluidPair& fluids);

struct InvasionEvent {
    double applied_pressure = 0.0;  // Pa, running maximum (drainage convention)
    bool is_pore = false;
    int element = 0;  // pore or throat id
    double cumulative_saturation = 0.0;
};

struct PercolationResult {
    std::vector<InvasionEvent> events;
    std::vector<int> trapped_pores;  // sorted ascending
    double final_saturation = 0.0;
};

PercolationResult invasion_percolation(const PoreNetwork& net, const FluidPair& fluids,
                                       Face inlet, Face outlet, bool trapping);

// Right-continuous step interpolation of the event staircase onto a sorted
// pressure grid.
PressureSaturationCurve curve_from_result(const PercolationResult& res,
                                          const std::vector<double>& pressure_grid);

}  // namespace porefill::pnmperc
