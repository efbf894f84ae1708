// End-to-end orchestration: structure -> classify -> network extraction ->
// reference lattice Boltzmann fill -> unit bridge and calibration -> pore
// network sweep -> transport metrics -> feedback table. Every stage reads its
// inputs from artifact files and records content hashes in a manifest, so a
// rerun skips stages whose inputs are unchanged.

#pragma once

#include <map>
#include <string>
#include <vector>

#include "porefill/config.hpp"
#include "porefill/core.hpp"
#include "porefill/lattice.hpp"
#include "porefill/network.hpp"

namespace porefill::wf {

struct StructureSource {
    bool generate = false;      // exactly one of generate / input_path
    std::string input_path;
    int nx = 64, ny = 64, nz = 64;
    double voxel_size = 1.0;    // um
    double radius_mean = 5.0;   // um
    double radius_sd = 1.0;     // um
    double target_porosity = 0.5;
    std::uint64_t seed = 42;
};

struct WorkflowConfig {
    StructureSource structure;
    netextract::SnowParams snow;

    std::vector<double> sigma_list;  // N/m, sweep
    std::vector<double> theta_list;  // deg, sweep
    double reference_sigma = 0.072;  // physical pair the lattice run represents
    double reference_theta = 60.0;
    bool pnm_trapping = false;

    lbm::ShanChenParams shan_chen;
    lbm::FillProtocol protocol;
    Face inlet = Face::XMin;
    Face outlet = Face::XMax;

    double sigma_lat = 0.0;  // measured lattice surface tension, required
    double nu_phys = 1e-6;   // m^2/s

    std::string out_dir = "out";
    int workers = 1;

    void validate() const;  // CONFIG_ERROR on violation
};

// Reads and validates the workflow sections of a parsed config file.
WorkflowConfig parse_workflow_config(const Config& cfg);

// Sorted key=value store persisted as manifest.txt. Keys are
// "artifact:<relative path>" (content hash) and "stage:<name>" (input hash).
struct Manifest {
    std::map<std::string, std::string> entries;

    static Manifest load(const std::string& path);  // missing file -> empty
    void save(const std::string& path) const;
    std::vector<std::string> artifacts() const;  // relative paths, sorted
};

struct WorkflowResult {
    std::string manifest_path;
    std::vector<std::string> artifacts;   // relative paths, sorted
    std::vector<std::string> stages_run;  // executed this invocation, in order
};

// Runs all stages under cfg [output] directory, skipping any stage whose
// input hash matches the existing manifest and whose outputs are intact.
// Module errors propagate with the failing stage name prefixed.
WorkflowResult run_workflow(const Config& cfg, bool verbose = false);

}  // namespace porefill::wf
