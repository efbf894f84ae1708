// Effective diffusivity of a conducting phase by solving the steady Laplace
// problem with fixed-concentration faces, plus the before/after entrapment
// report that quantifies how residual gas degrades transport.

#pragma once

#include <string>

#include "porefill/connected_components.hpp"
#include "porefill/voxel_image.hpp"

namespace porefill::transport {

using voxelgrid::LabelSet;
using voxelgrid::VoxelImage;

struct TransportResult {
    double deff_ratio = 0.0;           // D_eff / D_0
    double tortuosity = 0.0;           // conducting_fraction / deff_ratio
    double conducting_fraction = 0.0;  // conducting voxels / all voxels
    double flux_in = 0.0;              // lattice flux through the inlet face
    double flux_out = 0.0;
    int axis = 0;
    int iterations = 0;  // CG iterations to reach tolerance
};

// Unit conductance between face-adjacent conducting voxels, conductance 2 for
// the half cell against each Dirichlet face (c=1 at axis min, c=0 at axis
// max). Matrix-free Jacobi-preconditioned conjugate gradients to relative
// residual `tol`; `max_iter` <= 0 selects the 10*N^(2/3) default cap.
// Throws NONPERCOLATING when the conducting phase does not span the axis and
// NOT_CONVERGED when the iteration cap is hit.
TransportResult effective_diffusivity(const VoxelImage& img, LabelSet conducting,
                                      int axis, double tol = 1e-8, int max_iter = 0);

struct EntrapmentReport {
    TransportResult before;  // ideally filled pore space of the dry image
    TransportResult after;   // electrolyte network of the filled image
    double delta_deff_ratio = 0.0;  // before - after, >= 0 up to solver noise
    double delta_tau = 0.0;         // after - before
    double saturation = 0.0;        // electrolyte voxels / non-solid voxels
    double wetted_solid_fraction = 0.0;
};

// Diffusivity of {PORE, ELECTROLYTE, GAS} on the dry image versus
// {ELECTROLYTE} on the filled one. Dimensions must match; a non-percolating
// electrolyte phase propagates NONPERCOLATING.
EntrapmentReport entrapment_penalty(const VoxelImage& before, const VoxelImage& after,
                                    int axis);

// Interface voxels face-adjacent to electrolyte over interface voxels
// face-adjacent to any fluid.
double wetted_solid_fraction(const VoxelImage& img);

// Appends one row to the cross-run feedback table, creating it with a header
// line when missing.
void append_feedback_row(const std::string& path, const std::string& structure_hash,
                         double theta_deg, double sigma, const EntrapmentReport& report);

}  // namespace porefill::transport
