#include "porefill/workflow.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <sstream>
#include <thread>

#include "porefill/curve.hpp"
#include "porefill/percolation.hpp"
#include "porefill/transport.hpp"
#include "porefill/units.hpp"
#include "porefill/voxel_image.hpp"

namespace fs = std::filesystem;

namespace porefill::wf {

using voxelgrid::VoxelImage;

void WorkflowConfig::validate() const {
    if (structure.generate == !structure.input_path.empty()) {
        throw Error(ErrorCode::CONFIG_ERROR,
                    "exactly one structure source required: [structure] generate or input");
    }
    if (structure.generate) {
        if (structure.nx < 4 || structure.ny < 4 || structure.nz < 4) {
            throw Error(ErrorCode::CONFIG_ERROR, "[structure] dimensions must be >= 4");
        }
        if (structure.voxel_size <= 0 || structure.radius_mean <= 0 ||
            structure.radius_sd < 0) {
            throw Error(ErrorCode::CONFIG_ERROR, "[structure] sizes must be positive");
        }
        if (structure.target_porosity <= 0 || structure.target_porosity >= 1) {
            throw Error(ErrorCode::CONFIG_ERROR, "[structure] porosity must be in (0,1)");
        }
    }
    if (sigma_list.empty()) {
        throw Error(ErrorCode::CONFIG_ERROR, "[fluids] surface_tension sweep is empty");
    }
    if (theta_list.empty()) {
        throw Error(ErrorCode::CONFIG_ERROR, "[fluids] contact_angle sweep is empty");
    }
    for (double s : sigma_list) {
        if (!(s > 0)) {
            throw Error(ErrorCode::CONFIG_ERROR, "[fluids] surface tensions must be positive");
        }
    }
    for (double t : theta_list) {
        if (!(t > 0 && t <= 90)) {
            throw Error(ErrorCode::CONFIG_ERROR,
                        "[fluids] contact angles must lie in (0, 90] degrees "
                        "(wetting electrolyte)");
        }
    }
    if (!(reference_sigma > 0) || !(reference_theta > 0 && reference_theta <= 90)) {
        throw Error(ErrorCode::CONFIG_ERROR, "[fluids] reference pair out of range");
    }
    shan_chen.validate();
    protocol.validate();
    if (inlet == outlet) {
        throw Error(ErrorCode::CONFIG_ERROR, "[fill] inlet and outlet must differ");
    }
    if (!(sigma_lat > 0)) {
        throw Error(ErrorCode::CONFIG_ERROR,
                    "[units] sigma_lat must be positive (measure it with "
                    "'porefill calibrate laplace')");
    }
    if (!(nu_phys > 0)) {
        throw Error(ErrorCode::CONFIG_ERROR, "[units] nu_phys must be positive");
    }
    if (out_dir.empty()) {
        throw Error(ErrorCode::CONFIG_ERROR, "[output] directory must be non-empty");
    }
    if (workers < 1) {
        throw Error(ErrorCode::CONFIG_ERROR, "[output] workers must be >= 1");
    }
}

WorkflowConfig parse_workflow_config(const Config& cfg) {
    WorkflowConfig wc;

    wc.structure.input_path = cfg.get("structure", "input", "");
    wc.structure.generate =
        cfg.has("structure", "generate") ? cfg.get_bool("structure", "generate", false)
                                         : wc.structure.input_path.empty();
    wc.structure.nx = cfg.get_int("structure", "nx", wc.structure.nx);
    wc.structure.ny = cfg.get_int("structure", "ny", wc.structure.ny);
    wc.structure.nz = cfg.get_int("structure", "nz", wc.structure.nz);
    wc.structure.voxel_size = cfg.get_double("structure", "voxel_size", wc.structure.voxel_size);
    wc.structure.radius_mean = cfg.get_double("structure", "radius_mean", wc.structure.radius_mean);
    wc.structure.radius_sd = cfg.get_double("structure", "radius_sd", wc.structure.radius_sd);
    wc.structure.target_porosity = cfg.get_double("structure", "porosity", wc.structure.target_porosity);
    wc.structure.seed = cfg.get_u64("structure", "seed", wc.structure.seed);

    wc.snow.sigma = cfg.get_double("snow", "sigma", wc.snow.sigma);
    wc.snow.maxfilter_radius = cfg.get_int("snow", "maxfilter_radius", wc.snow.maxfilter_radius);
    wc.snow.merge_radius_factor =
        cfg.get_double("snow", "merge_radius_factor", wc.snow.merge_radius_factor);

    wc.sigma_list = cfg.get_list("fluids", "surface_tension", {0.072});
    wc.theta_list = cfg.get_list("fluids", "contact_angle", {60.0});
    wc.reference_sigma = cfg.get_double("fluids", "reference_sigma",
                                        wc.sigma_list.empty() ? 0.072 : wc.sigma_list[0]);
    wc.reference_theta = cfg.get_double("fluids", "reference_theta",
                                        wc.theta_list.empty() ? 60.0 : wc.theta_list[0]);
    wc.pnm_trapping = cfg.get_bool("fluids", "trapping", false);

    wc.shan_chen.g_ab = cfg.get_double("lbm", "g_ab", wc.shan_chen.g_ab);
    wc.shan_chen.g_ads_a = cfg.get_double("lbm", "g_ads_a", wc.shan_chen.g_ads_a);
    wc.shan_chen.g_ads_b = cfg.get_double("lbm", "g_ads_b", wc.shan_chen.g_ads_b);
    wc.shan_chen.tau_a = cfg.get_double("lbm", "tau_a", wc.shan_chen.tau_a);
    wc.shan_chen.tau_b = cfg.get_double("lbm", "tau_b", wc.shan_chen.tau_b);
    wc.shan_chen.rho_init_a = cfg.get_double("lbm", "rho_init_a", wc.shan_chen.rho_init_a);
    wc.shan_chen.rho_init_b = cfg.get_double("lbm", "rho_init_b", wc.shan_chen.rho_init_b);
    wc.shan_chen.rho_minor = cfg.get_double("lbm", "rho_minor", wc.shan_chen.rho_minor);

    wc.protocol.pressure_steps = cfg.get_list("fill", "pressure_steps", {});
    wc.protocol.steps_per_level = cfg.get_int("fill", "steps_per_level", wc.protocol.steps_per_level);
    wc.protocol.convergence_tol =
        cfg.get_double("fill", "convergence_tol", wc.protocol.convergence_tol);
    wc.inlet = face_from_name(cfg.get("fill", "inlet", "xmin"));
    wc.outlet = face_from_name(cfg.get("fill", "outlet", "xmax"));

    wc.sigma_lat = cfg.get_double("units", "sigma_lat", wc.sigma_lat);
    wc.nu_phys = cfg.get_double("units", "nu_phys", wc.nu_phys);

    wc.out_dir = cfg.get("output", "directory", wc.out_dir);
    wc.workers = cfg.get_int("output", "workers", wc.workers);

    wc.validate();
    return wc;
}

Manifest Manifest::load(const std::string& path) {
    Manifest m;
    std::ifstream in(path);
    if (!in) return m;
    std::string line;
    while (std::getline(in, line)) {
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        m.entries[line.substr(0, eq)] = line.substr(eq + 1);
    }
    return m;
}

void Manifest::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::IO_ERROR, "cannot write " + path);
    for (const auto& [key, value] : entries) out << key << "=" << value << "\n";
    if (!out) throw Error(ErrorCode::IO_ERROR, "short write on " + path);
}

std::vector<std::string> Manifest::artifacts() const {
    std::vector<std::string> out;
    const std::string prefix = "artifact:";
    for (const auto& [key, value] : entries) {
        if (key.rfind(prefix, 0) == 0) out.push_back(key.substr(prefix.size()));
    }
    return out;
}

namespace {

// PNM curves are emitted on the capillary entry-magnitude axis 4*sigma*cos(theta)/d
// (positive, drainage ordering: widest constrictions pass first). This keeps the
// pressure axis sign-compatible with the lattice fill drive so a positive
// multiplicative calibration can align the two.
PressureSaturationCurve pnm_magnitude_curve(const netextract::PoreNetwork& net,
                                            double sigma, double theta_deg, Face inlet,
                                            Face outlet, bool trapping) {
    pnmperc::FluidPair fluids;
    fluids.surface_tension = sigma;
    fluids.contact_angle_deg = 180.0 - theta_deg;
    const auto res = pnmperc::invasion_percolation(net, fluids, inlet, outlet, trapping);
    std::vector<double> grid;
    grid.reserve(res.events.size());
    for (const auto& e : res.events) grid.push_back(e.applied_pressure);
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    return pnmperc::curve_from_result(res, grid);
}

// Drops the reservoir planes, plus one extra plane on the outlet side where
// the fixed gas vent pins a one-cell diffuse-interface foot.
VoxelImage strip_reservoirs(const VoxelImage& img, Face inlet, Face outlet) {
    int origin[3] = {0, 0, 0};
    int size[3] = {img.nx, img.ny, img.nz};
    const auto shave = [&](Face f, int planes) {
        const int axis = face_axis(f);
        if (face_is_min(f)) origin[axis] += planes;
        size[axis] -= planes;
    };
    shave(inlet, 1);
    shave(outlet, 2);
    return voxelgrid::crop(img, origin[0], origin[1], origin[2], size[0], size[1], size[2]);
}

void write_keyvals(const std::string& path,
                   const std::vector<std::pair<std::string, std::string>>& rows) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::IO_ERROR, "cannot write " + path);
    for (const auto& [key, value] : rows) out << key << "=" << value << "\n";
    if (!out) throw Error(ErrorCode::IO_ERROR, "short write on " + path);
}

Config read_keyvals(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IO_ERROR, "cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return Config::from_string(buf.str());
}

struct StageContext {
    std::string dir;
    const Manifest* previous = nullptr;
    Manifest* manifest = nullptr;
    WorkflowResult* result = nullptr;
    bool verbose = false;

    std::string hash_of(const std::string& rel) const { return hex64(hash_file(dir + rel)); }

    // Hash recorded for an artifact produced (or carried over) this run.
    std::string recorded(const std::string& rel) const {
        return manifest->entries.at("artifact:" + rel);
    }

    void run(const std::string& name, const std::string& input_hash,
             const std::vector<std::string>& outputs, const std::function<void()>& fn) const {
        const std::string stage_key = "stage:" + name;
        bool fresh = previous->entries.count(stage_key) > 0 &&
                     previous->entries.at(stage_key) == input_hash;
        if (fresh) {
            for (const auto& rel : outputs) {
                const auto it = previous->entries.find("artifact:" + rel);
                if (it == previous->entries.end() || !fs::exists(dir + rel) ||
                    hash_of(rel) != it->second) {
                    fresh = false;
                    break;
                }
            }
        }
        if (fresh) {
            if (verbose) std::fprintf(stderr, "[workflow] %s: inputs unchanged, skipping\n", name.c_str());
            for (const auto& rel : outputs) {
                manifest->entries["artifact:" + rel] = previous->entries.at("artifact:" + rel);
            }
            manifest->entries[stage_key] = input_hash;
            return;
        }
        if (verbose) std::fprintf(stderr, "[workflow] %s\n", name.c_str());
        try {
            fn();
        } catch (const Error& e) {
            throw Error(e.code(), "stage " + name + ": " + e.message());
        }
        for (const auto& rel : outputs) {
            manifest->entries["artifact:" + rel] = hash_of(rel);
        }
        manifest->entries[stage_key] = input_hash;
        result->stages_run.push_back(name);
    }
};

std::string chain_hash(const std::vector<std::string>& parts) {
    Fnv1a64 h;
    for (const auto& p : parts) {
        h.update(p.data(), p.size());
        h.update("|", 1);
    }
    return hex64(h.digest());
}

}  // namespace

WorkflowResult run_workflow(const Config& cfg, bool verbose) {
    const WorkflowConfig wc = parse_workflow_config(cfg);
    fs::create_directories(wc.out_dir);
    const std::string dir = wc.out_dir + "/";

    const Manifest previous = Manifest::load(dir + "manifest.txt");
    Manifest manifest;
    WorkflowResult result;
    result.manifest_path = dir + "manifest.txt";

    StageContext ctx{dir, &previous, &manifest, &result, verbose};

    const std::string structure_cfg = hex64(cfg.section_hash("structure"));
    const std::string snow_cfg = hex64(cfg.section_hash("snow"));
    const std::string fluids_cfg = hex64(cfg.section_hash("fluids"));
    const std::string lbm_cfg = hex64(cfg.section_hash("lbm"));
    const std::string fill_cfg = hex64(cfg.section_hash("fill"));
    const std::string units_cfg = hex64(cfg.section_hash("units"));

    // -- structure ------------------------------------------------------------
    std::string structure_input = structure_cfg;
    if (!wc.structure.generate) {
        structure_input = chain_hash({structure_cfg, hex64(hash_file(wc.structure.input_path))});
    }
    ctx.run("structure", structure_input, {"structure.vxi"}, [&] {
        VoxelImage img;
        if (wc.structure.generate) {
            img = voxelgrid::generate_sphere_pack(
                wc.structure.nx, wc.structure.ny, wc.structure.nz, wc.structure.voxel_size,
                wc.structure.radius_mean, wc.structure.radius_sd,
                wc.structure.target_porosity, wc.structure.seed);
        } else {
            img = voxelgrid::read_vxi(wc.structure.input_path);
        }
        voxelgrid::write_vxi(img, dir + "structure.vxi");
    });

    // -- classify ---------------------------------------------------------------
    ctx.run("classify", chain_hash({ctx.recorded("structure.vxi")}), {"classified.vxi"}, [&] {
        const VoxelImage img = voxelgrid::read_vxi(dir + "structure.vxi");
        voxelgrid::write_vxi(voxelgrid::classify_solid(img), dir + "classified.vxi");
    });

    // -- extract ----------------------------------------------------------------
    ctx.run("extract", chain_hash({ctx.recorded("classified.vxi"), snow_cfg}),
            {"pores.csv", "throats.csv", "network_stats.txt"}, [&] {
                const VoxelImage img = voxelgrid::read_vxi(dir + "classified.vxi");
                const auto net = netextract::extract_network(img, wc.snow);
                netextract::write_network_csv(net, dir + "pores.csv", dir + "throats.csv");
                const auto stats = netextract::network_stats(net);
                write_keyvals(dir + "network_stats.txt",
                              {{"pore_count", std::to_string(stats.pore_count)},
                               {"throat_count", std::to_string(stats.throat_count)},
                               {"d50_um", format_double(stats.d50)},
                               {"mean_coordination", format_double(stats.mean_coordination)}});
            });

    // -- fill (the one lattice reference run) ------------------------------------
    ctx.run("fill", chain_hash({ctx.recorded("classified.vxi"), lbm_cfg, fill_cfg}),
            {"lbm_curve_lattice.csv", "filled.vxi", "state.lbc", "gas_analysis.txt"}, [&] {
                const VoxelImage img = voxelgrid::read_vxi(dir + "classified.vxi");
                lbm::Lattice lattice = lbm::init_lattice(img, wc.shan_chen, wc.inlet, wc.outlet);
                if (!lattice.spanning_pore_path()) {
                    std::fprintf(stderr,
                                 "warning: no pore path connects inlet to outlet; "
                                 "filling will stop at the blocking interface\n");
                }
                const auto fill = lbm::fill_simulation(lattice, wc.protocol, wc.workers, verbose);
                write_curve_csv(fill.curve, dir + "lbm_curve_lattice.csv");
                lattice.save_checkpoint(dir + "state.lbc");
                voxelgrid::write_vxi(lattice.to_image(), dir + "filled.vxi");
                const auto gas = lbm::residual_gas_analysis(lattice);
                std::vector<std::pair<std::string, std::string>> rows{
                    {"final_saturation", format_double(gas.final_saturation)},
                    {"cluster_count", std::to_string(gas.cluster_count)},
                    {"wetted_solid_fraction", format_double(gas.wetted_solid_fraction)},
                };
                const std::size_t top = std::min<std::size_t>(gas.clusters.size(), 10);
                for (std::size_t i = 0; i < top; ++i) {
                    const std::string stem = "cluster_" + std::to_string(i + 1);
                    rows.emplace_back(stem + "_voxels", std::to_string(gas.clusters[i].voxels));
                    rows.emplace_back(stem + "_touches_inlet",
                                      gas.clusters[i].touches_inlet ? "1" : "0");
                }
                write_keyvals(dir + "gas_analysis.txt", rows);
            });

    // -- units (lattice curve -> physical pressures) ------------------------------
    ctx.run("units",
            chain_hash({ctx.recorded("lbm_curve_lattice.csv"), ctx.recorded("network_stats.txt"),
                        ctx.recorded("classified.vxi"), units_cfg, fluids_cfg, lbm_cfg}),
            {"units.txt", "lbm_curve.csv"}, [&] {
                const auto stats = read_keyvals(dir + "network_stats.txt");
                const double d50 = stats.get_double("", "d50_um", 0.0);
                const VoxelImage img = voxelgrid::read_vxi(dir + "classified.vxi");
                const double d50_lat = d50 / img.voxel_size;
                const double nu_lat = (wc.shan_chen.tau_a - 0.5) / 3.0;
                const auto units = unitbridge::build_units(d50, d50_lat, wc.reference_sigma,
                                                           wc.sigma_lat, wc.nu_phys, nu_lat);

                // Inlet overpressure in lattice units via the mixture equation of
                // state, then the Laplace-consistent pressure scale.
                const auto& p = wc.shan_chen;
                const auto eos = [&](double ra, double rb) {
                    return (ra + rb + p.g_ab * ra * rb) / 3.0;
                };
                const double p_ref = eos(p.rho_init_a, p.rho_minor);
                PressureSaturationCurve lattice_curve =
                    read_curve_csv(dir + "lbm_curve_lattice.csv");
                for (auto& point : lattice_curve.points) {
                    point.pressure = eos(p.rho_init_a + point.pressure, p.rho_minor) - p_ref;
                }
                write_curve_csv(unitbridge::convert_curve(lattice_curve, units),
                                dir + "lbm_curve.csv");
                write_keyvals(dir + "units.txt",
                              {{"dx_m", format_double(units.dx)},
                               {"dt_s", format_double(units.dt)},
                               {"pressure_scale_pa", format_double(units.pressure_scale)},
                               {"d50_um", format_double(d50)},
                               {"d50_lat", format_double(d50_lat)},
                               {"sigma_lat", format_double(wc.sigma_lat)},
                               {"nu_lat", format_double(nu_lat)}});
            });

    // -- calibrate (PNM pressure axis against the lattice reference) --------------
    ctx.run("calibrate",
            chain_hash({ctx.recorded("lbm_curve.csv"), ctx.recorded("pores.csv"),
                        ctx.recorded("throats.csv"), fluids_cfg, fill_cfg}),
            {"pnm_reference.csv", "calibration.txt"}, [&] {
                const auto net =
                    netextract::read_network_csv(dir + "pores.csv", dir + "throats.csv");
                const auto pnm = pnm_magnitude_curve(net, wc.reference_sigma, wc.reference_theta,
                                                     wc.inlet, wc.outlet, wc.pnm_trapping);
                write_curve_csv(pnm, dir + "pnm_reference.csv");
                const auto lbm_curve = read_curve_csv(dir + "lbm_curve.csv");
                const auto calib = unitbridge::calibrate_pnm(lbm_curve, pnm);
                unitbridge::write_calibration_report(calib, dir + "calibration.txt",
                                                     dir + "lbm_curve.csv",
                                                     dir + "pnm_reference.csv");
            });

    // -- sweep (calibrated PNM curves over the full parameter grid) ---------------
    std::vector<std::string> sweep_outputs{"sweep_index.csv"};
    for (std::size_t i = 0; i < wc.sigma_list.size(); ++i) {
        for (std::size_t j = 0; j < wc.theta_list.size(); ++j) {
            sweep_outputs.push_back("pnm_s" + std::to_string(i) + "_t" + std::to_string(j) +
                                    ".csv");
        }
    }
    ctx.run("sweep",
            chain_hash({ctx.recorded("pores.csv"), ctx.recorded("throats.csv"),
                        ctx.recorded("calibration.txt"), fluids_cfg, fill_cfg}),
            sweep_outputs, [&] {
                const auto net =
                    netextract::read_network_csv(dir + "pores.csv", dir + "throats.csv");
                const double k =
                    read_keyvals(dir + "calibration.txt").get_double("", "k", 1.0);

                struct Task {
                    std::size_t i, j;
                    std::string file;
                };
                std::vector<Task> tasks;
                for (std::size_t i = 0; i < wc.sigma_list.size(); ++i) {
                    for (std::size_t j = 0; j < wc.theta_list.size(); ++j) {
                        tasks.push_back({i, j,
                                         "pnm_s" + std::to_string(i) + "_t" +
                                             std::to_string(j) + ".csv"});
                    }
                }

                const auto run_task = [&](const Task& t) {
                    auto curve = pnm_magnitude_curve(net, wc.sigma_list[t.i],
                                                     wc.theta_list[t.j], wc.inlet, wc.outlet,
                                                     wc.pnm_trapping);
                    for (auto& point : curve.points) point.pressure *= k;
                    write_curve_csv(curve, dir + t.file);
                };

                const int pool = std::min<int>(wc.workers, static_cast<int>(tasks.size()));
                if (pool <= 1) {
                    for (const auto& t : tasks) run_task(t);
                } else {
                    std::atomic<std::size_t> next{0};
                    std::exception_ptr first_error;
                    std::mutex error_mutex;
                    auto body = [&] {
                        for (;;) {
                            const std::size_t idx = next.fetch_add(1);
                            if (idx >= tasks.size()) return;
                            try {
                                run_task(tasks[idx]);
                            } catch (...) {
                                std::lock_guard<std::mutex> lock(error_mutex);
                                if (!first_error) first_error = std::current_exception();
                                return;
                            }
                        }
                    };
                    std::vector<std::thread> threads;
                    for (int w = 1; w < pool; ++w) threads.emplace_back(body);
                    body();
                    for (auto& t : threads) t.join();
                    if (first_error) std::rethrow_exception(first_error);
                }

                std::ofstream index(dir + "sweep_index.csv", std::ios::binary);
                if (!index) throw Error(ErrorCode::IO_ERROR, "cannot write sweep_index.csv");
                index << "file,surface_tension,contact_angle_deg\n";
                for (const auto& t : tasks) {
                    index << t.file << "," << format_double(wc.sigma_list[t.i]) << ","
                          << format_double(wc.theta_list[t.j]) << "\n";
                }
            });

    // -- transport (feedback metrics on the filled structure) ---------------------
    ctx.run("transport",
            chain_hash({ctx.recorded("classified.vxi"), ctx.recorded("filled.vxi"), fill_cfg,
                        fluids_cfg}),
            {"transport.txt", "feedback.csv"}, [&] {
                // The reservoir planes are boundary conditions, not sample: the
                // outlet layer is pinned gas-majority and would mask any spanning
                // electrolyte path, so both images are compared on the interior.
                const VoxelImage before = strip_reservoirs(
                    voxelgrid::read_vxi(dir + "classified.vxi"), wc.inlet, wc.outlet);
                const VoxelImage after = strip_reservoirs(
                    voxelgrid::read_vxi(dir + "filled.vxi"), wc.inlet, wc.outlet);
                const int axis = face_axis(wc.inlet);
                const auto report = transport::entrapment_penalty(before, after, axis);
                write_keyvals(
                    dir + "transport.txt",
                    {{"deff_ratio_before", format_double(report.before.deff_ratio)},
                     {"deff_ratio_after", format_double(report.after.deff_ratio)},
                     {"tau_before", format_double(report.before.tortuosity)},
                     {"tau_after", format_double(report.after.tortuosity)},
                     {"delta_deff_ratio", format_double(report.delta_deff_ratio)},
                     {"delta_tau", format_double(report.delta_tau)},
                     {"saturation", format_double(report.saturation)},
                     {"wetted_solid_fraction", format_double(report.wetted_solid_fraction)}});
                fs::remove(dir + "feedback.csv");
                transport::append_feedback_row(dir + "feedback.csv",
                                               hex64(before.content_hash()),
                                               wc.reference_theta, wc.reference_sigma, report);
            });

    manifest.save(result.manifest_path);
    result.artifacts = manifest.artifacts();
    return result;
}

}  // namespace porefill::wf
