// Command-line driver: one subcommand per pipeline stage plus the end-to-end
// workflow, benchmark and plot emitters. Exit codes: 0 ok, 2 configuration
// error, 3 stage failure, 4 numeric failure.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "porefill/bench.hpp"
#include "porefill/calibration.hpp"
#include "porefill/config.hpp"
#include "porefill/connected_components.hpp"
#include "porefill/curve.hpp"
#include "porefill/lattice.hpp"
#include "porefill/network.hpp"
#include "porefill/percolation.hpp"
#include "porefill/transport.hpp"
#include "porefill/units.hpp"
#include "porefill/voxel_image.hpp"
#include "porefill/workflow.hpp"

namespace fs = std::filesystem;

using namespace porefill;
using voxelgrid::VoxelImage;

namespace {

int exit_code_for(ErrorCode code) {
    switch (code) {
        case ErrorCode::CONFIG_ERROR:
            return 2;
        case ErrorCode::NUMERIC_BLOWUP:
        case ErrorCode::NOT_CONVERGED:
            return 4;
        default:
            return 3;
    }
}

lbm::ShanChenParams shan_chen_from(const wf::Config& cfg) {
    lbm::ShanChenParams p;
    p.g_ab = cfg.get_double("lbm", "g_ab", p.g_ab);
    p.g_ads_a = cfg.get_double("lbm", "g_ads_a", p.g_ads_a);
    p.g_ads_b = cfg.get_double("lbm", "g_ads_b", p.g_ads_b);
    p.tau_a = cfg.get_double("lbm", "tau_a", p.tau_a);
    p.tau_b = cfg.get_double("lbm", "tau_b", p.tau_b);
    p.rho_init_a = cfg.get_double("lbm", "rho_init_a", p.rho_init_a);
    p.rho_init_b = cfg.get_double("lbm", "rho_init_b", p.rho_init_b);
    p.rho_minor = cfg.get_double("lbm", "rho_minor", p.rho_minor);
    p.validate();
    return p;
}

lbm::FillProtocol protocol_from(const wf::Config& cfg) {
    lbm::FillProtocol protocol;
    protocol.pressure_steps = cfg.get_list("fill", "pressure_steps", {});
    protocol.steps_per_level = cfg.get_int("fill", "steps_per_level", protocol.steps_per_level);
    protocol.convergence_tol =
        cfg.get_double("fill", "convergence_tol", protocol.convergence_tol);
    protocol.validate();
    return protocol;
}

std::string default_path(const std::string& explicit_path, const std::string& out,
                         const std::string& name) {
    return explicit_path.empty() ? out + "/" + name : explicit_path;
}

void print_gas_summary(const lbm::GasAnalysis& gas) {
    std::printf("residual gas: %d cluster(s), saturation %.4f, wetted solid %.4f\n",
                gas.cluster_count, gas.final_saturation, gas.wetted_solid_fraction);
    const std::size_t top = std::min<std::size_t>(gas.clusters.size(), 5);
    for (std::size_t i = 0; i < top; ++i) {
        std::printf("  cluster %zu: %lld voxels%s\n", i + 1,
                    static_cast<long long>(gas.clusters[i].voxels),
                    gas.clusters[i].touches_inlet ? " (touches inlet)" : "");
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"pore-scale electrolyte filling toolkit"};
    app.require_subcommand(1);

    std::string config_path;
    int workers = 0;
    std::uint64_t seed = 0;
    std::string out_override;
    bool verbose = false;
    app.add_option("--config", config_path, "configuration file (key=value with [sections])");
    auto* workers_opt = app.add_option("--workers", workers, "worker thread count");
    auto* seed_opt = app.add_option("--seed", seed, "structure generation seed");
    auto* out_opt = app.add_option("--out", out_override, "output directory");
    app.add_flag("--verbose,-v", verbose, "progress logging to stderr");

    auto* c_generate = app.add_subcommand("generate", "generate a sphere-pack structure");
    bool gen_vtk = false;
    c_generate->add_flag("--vtk", gen_vtk, "also write a VTK copy");

    auto* c_classify = app.add_subcommand("classify", "split solid into interface and bulk");
    std::string classify_input;
    c_classify->add_option("--input", classify_input, "input .vxi (default <out>/structure.vxi)");

    auto* c_extract = app.add_subcommand("extract", "extract the pore network");
    std::string extract_input;
    c_extract->add_option("--input", extract_input, "input .vxi (default <out>/classified.vxi)");

    auto* c_percolate = app.add_subcommand("percolate", "invasion percolation on a network");
    std::string perc_pores, perc_throats;
    double perc_sigma = 0.0, perc_theta = -1.0;
    bool perc_trapping = false;
    c_percolate->add_option("--pores", perc_pores, "pores CSV (default <out>/pores.csv)");
    c_percolate->add_option("--throats", perc_throats, "throats CSV (default <out>/throats.csv)");
    c_percolate->add_option("--sigma", perc_sigma, "surface tension [N/m]");
    c_percolate->add_option("--theta", perc_theta, "contact angle [deg]");
    c_percolate->add_flag("--trapping", perc_trapping, "freeze defender clusters cut off from the outlet");

    auto* c_fill = app.add_subcommand("fill", "lattice Boltzmann filling simulation");
    std::string fill_input;
    bool fill_resume = false;
    c_fill->add_option("--input", fill_input, "input .vxi (default <out>/classified.vxi)");
    c_fill->add_flag("--resume", fill_resume, "resume from <out>/state.lbc when present");

    auto* c_calibrate = app.add_subcommand("calibrate", "calibration runs");
    std::string calib_task;
    std::string calib_lbm, calib_pnm;
    c_calibrate->add_option("task", calib_task, "laplace | contact | pnm")
        ->required()
        ->check(CLI::IsMember({"laplace", "contact", "pnm"}));
    c_calibrate->add_option("--lbm", calib_lbm, "reference curve CSV (pnm task)");
    c_calibrate->add_option("--pnm", calib_pnm, "pore-network curve CSV (pnm task)");

    auto* c_transport = app.add_subcommand("transport", "effective diffusivity and tortuosity");
    std::string tr_before, tr_after, tr_axis = "x";
    c_transport->add_option("--before", tr_before, "dry structure .vxi (default <out>/classified.vxi)");
    c_transport->add_option("--after", tr_after, "filled structure .vxi for the entrapment report");
    c_transport->add_option("--axis", tr_axis, "transport axis")
        ->check(CLI::IsMember({"x", "y", "z"}));

    auto* c_workflow = app.add_subcommand("workflow", "run the full pipeline");
    auto* c_bench = app.add_subcommand("bench", "strong-scaling benchmark");
    auto* c_plot = app.add_subcommand("plot", "emit gnuplot scripts for the artifact directory");

    for (auto* sub : {c_generate, c_classify, c_extract, c_percolate, c_fill, c_calibrate,
                      c_transport, c_workflow, c_bench, c_plot}) {
        sub->fallthrough();
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        wf::Config cfg;
        if (!config_path.empty()) {
            try {
                cfg = wf::Config::load(config_path);
            } catch (const Error& e) {
                // An unreadable --config file is a config error, not a stage
                // failure.
                throw Error(ErrorCode::CONFIG_ERROR, e.message());
            }
        }
        if (*seed_opt) cfg.set("structure", "seed", std::to_string(seed));
        if (*workers_opt) cfg.set("output", "workers", std::to_string(workers));
        if (*out_opt) cfg.set("output", "directory", out_override);

        const std::string out = cfg.get("output", "directory", "out");
        const int n_workers = cfg.get_int("output", "workers", 1);
        if (n_workers < 1) throw Error(ErrorCode::CONFIG_ERROR, "workers must be >= 1");
        fs::create_directories(out);

        if (app.got_subcommand(c_generate)) {
            const VoxelImage img = voxelgrid::generate_sphere_pack(
                cfg.get_int("structure", "nx", 64), cfg.get_int("structure", "ny", 64),
                cfg.get_int("structure", "nz", 64), cfg.get_double("structure", "voxel_size", 1.0),
                cfg.get_double("structure", "radius_mean", 5.0),
                cfg.get_double("structure", "radius_sd", 1.0),
                cfg.get_double("structure", "porosity", 0.5),
                cfg.get_u64("structure", "seed", 42));
            voxelgrid::write_vxi(img, out + "/structure.vxi");
            if (gen_vtk) voxelgrid::write_vtk(img, out + "/structure.vtk");
            std::printf("%s/structure.vxi: %dx%dx%d, porosity %.4f\n", out.c_str(), img.nx,
                        img.ny, img.nz, voxelgrid::porosity(img));
        } else if (app.got_subcommand(c_classify)) {
            const VoxelImage img =
                voxelgrid::read_vxi(default_path(classify_input, out, "structure.vxi"));
            const VoxelImage classified = voxelgrid::classify_solid(img);
            voxelgrid::write_vxi(classified, out + "/classified.vxi");
            std::int64_t interface = 0, bulk = 0;
            for (const auto l : classified.labels) {
                interface += l == voxelgrid::SOLID_INTERFACE;
                bulk += l == voxelgrid::SOLID_BULK;
            }
            std::printf("%s/classified.vxi: %lld interface, %lld bulk solid voxels\n",
                        out.c_str(), static_cast<long long>(interface),
                        static_cast<long long>(bulk));
        } else if (app.got_subcommand(c_extract)) {
            const VoxelImage img =
                voxelgrid::read_vxi(default_path(extract_input, out, "classified.vxi"));
            netextract::SnowParams snow;
            snow.sigma = cfg.get_double("snow", "sigma", snow.sigma);
            snow.maxfilter_radius = cfg.get_int("snow", "maxfilter_radius", snow.maxfilter_radius);
            snow.merge_radius_factor =
                cfg.get_double("snow", "merge_radius_factor", snow.merge_radius_factor);
            const auto net = netextract::extract_network(img, snow);
            netextract::write_network_csv(net, out + "/pores.csv", out + "/throats.csv");
            const auto stats = netextract::network_stats(net);
            std::printf("%lld pores, %lld throats, d50 %.3f um, coordination %.2f\n",
                        static_cast<long long>(stats.pore_count),
                        static_cast<long long>(stats.throat_count), stats.d50,
                        stats.mean_coordination);
        } else if (app.got_subcommand(c_percolate)) {
            const auto net =
                netextract::read_network_csv(default_path(perc_pores, out, "pores.csv"),
                                             default_path(perc_throats, out, "throats.csv"));
            pnmperc::FluidPair fluids;
            fluids.surface_tension = perc_sigma > 0
                                         ? perc_sigma
                                         : cfg.get_double("fluids", "reference_sigma", 0.072);
            fluids.contact_angle_deg =
                perc_theta >= 0 ? perc_theta : cfg.get_double("fluids", "reference_theta", 60.0);
            const Face inlet = face_from_name(cfg.get("fill", "inlet", "xmin"));
            const Face outlet = face_from_name(cfg.get("fill", "outlet", "xmax"));
            const bool trapping =
                perc_trapping || cfg.get_bool("fluids", "trapping", false);
            const auto res = pnmperc::invasion_percolation(net, fluids, inlet, outlet, trapping);
            std::vector<double> grid;
            for (const auto& e : res.events) grid.push_back(e.applied_pressure);
            std::sort(grid.begin(), grid.end());
            grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
            write_curve_csv(pnmperc::curve_from_result(res, grid), out + "/pnm_curve.csv");
            std::printf("%zu invasion events, %zu trapped pores, final saturation %.4f\n",
                        res.events.size(), res.trapped_pores.size(), res.final_saturation);
        } else if (app.got_subcommand(c_fill)) {
            const VoxelImage img =
                voxelgrid::read_vxi(default_path(fill_input, out, "classified.vxi"));
            const auto params = shan_chen_from(cfg);
            const auto protocol = protocol_from(cfg);
            const Face inlet = face_from_name(cfg.get("fill", "inlet", "xmin"));
            const Face outlet = face_from_name(cfg.get("fill", "outlet", "xmax"));
            lbm::Lattice lattice = lbm::init_lattice(img, params, inlet, outlet);
            if (fill_resume && fs::exists(out + "/state.lbc")) {
                lattice.load_checkpoint(out + "/state.lbc");
                std::fprintf(stderr, "resumed at pressure step %d, lattice step %llu\n",
                             lattice.level_index() + 1,
                             static_cast<unsigned long long>(lattice.step_index()));
            }
            if (!lattice.spanning_pore_path()) {
                std::fprintf(stderr,
                             "warning: no pore path connects inlet to outlet; "
                             "filling will stop at the blocking interface\n");
            }
            const auto fill = lbm::fill_simulation(lattice, protocol, n_workers, verbose);
            write_curve_csv(fill.curve, out + "/lbm_curve_lattice.csv");
            lattice.save_checkpoint(out + "/state.lbc");
            voxelgrid::write_vxi(lattice.to_image(), out + "/filled.vxi");
            std::printf("filled %zu pressure levels, final saturation %.4f\n",
                        fill.curve.points.size(), lattice.saturation());
            print_gas_summary(lbm::residual_gas_analysis(lattice));
        } else if (app.got_subcommand(c_calibrate)) {
            const auto params = shan_chen_from(cfg);
            if (calib_task == "laplace") {
                const auto radii = cfg.get_list("calibrate", "radii", {8.0, 12.0, 16.0});
                const int max_steps = cfg.get_int("calibrate", "max_steps", 30000);
                const auto fit = lbm::laplace_calibration(radii, params, max_steps, n_workers);
                for (const auto& d : fit.droplets) {
                    std::printf("R %.2f: delta_p %.6f, sigma_lat %.6f (%d steps)\n", d.radius,
                                d.delta_p, d.sigma_lat, d.steps);
                }
                std::printf("fit: sigma_lat %.6f, R^2 %.6f, spread %.2f%%\n", fit.sigma_lat,
                            fit.r_squared, 100.0 * fit.max_sigma_spread);
                std::printf("use in config: [units] sigma_lat = %s\n",
                            format_double(fit.sigma_lat).c_str());
                std::vector<std::pair<std::string, std::string>> rows{
                    {"sigma_lat", format_double(fit.sigma_lat)},
                    {"r_squared", format_double(fit.r_squared)},
                    {"max_sigma_spread", format_double(fit.max_sigma_spread)}};
                std::ofstream txt(out + "/laplace.txt", std::ios::binary);
                for (const auto& [k, v] : rows) txt << k << "=" << v << "\n";
            } else if (calib_task == "contact") {
                const auto sweep =
                    cfg.get_list("calibrate", "g_ads", {-0.3, -0.2, -0.1, 0.0, 0.1});
                const int max_steps = cfg.get_int("calibrate", "max_steps", 20000);
                const auto points = lbm::contact_angle_calibration(sweep, params, max_steps);
                std::ofstream csv(out + "/contact_angle.csv", std::ios::binary);
                csv << "g_ads_a,g_ads_b,theta_deg,theta_oracle_deg,steps\n";
                for (const auto& p : points) {
                    std::printf("g_ads %+.3f -> theta %.2f deg (oracle %.2f, %d steps)\n",
                                p.g_ads_a, p.theta_deg, p.theta_oracle_deg, p.steps);
                    csv << format_double(p.g_ads_a) << "," << format_double(p.g_ads_b) << ","
                        << format_double(p.theta_deg) << "," << format_double(p.theta_oracle_deg)
                        << "," << p.steps << "\n";
                }
            } else {
                const std::string lbm_path = default_path(calib_lbm, out, "lbm_curve.csv");
                const std::string pnm_path = default_path(calib_pnm, out, "pnm_reference.csv");
                const auto calib =
                    unitbridge::calibrate_pnm(read_curve_csv(lbm_path), read_curve_csv(pnm_path));
                unitbridge::write_calibration_report(calib, out + "/calibration.txt", lbm_path,
                                                     pnm_path);
                std::printf("k %.6f, residual %.6f\n", calib.pressure_scale_correction,
                            calib.residual);
            }
        } else if (app.got_subcommand(c_transport)) {
            const VoxelImage before =
                voxelgrid::read_vxi(default_path(tr_before, out, "classified.vxi"));
            const int axis = tr_axis == "x" ? 0 : tr_axis == "y" ? 1 : 2;
            if (tr_after.empty()) {
                const auto res = transport::effective_diffusivity(
                    before,
                    voxelgrid::LabelSet{voxelgrid::PORE, voxelgrid::ELECTROLYTE, voxelgrid::GAS},
                    axis);
                std::printf("D_eff/D0 %.6f, tortuosity %.4f, porosity %.4f (%d iterations)\n",
                            res.deff_ratio, res.tortuosity, res.conducting_fraction,
                            res.iterations);
            } else {
                const VoxelImage after = voxelgrid::read_vxi(tr_after);
                const auto report = transport::entrapment_penalty(before, after, axis);
                std::printf("D_eff/D0 %.6f -> %.6f, tau %.4f -> %.4f\n",
                            report.before.deff_ratio, report.after.deff_ratio,
                            report.before.tortuosity, report.after.tortuosity);
                std::printf("saturation %.4f, wetted solid %.4f\n", report.saturation,
                            report.wetted_solid_fraction);
                transport::append_feedback_row(out + "/feedback.csv",
                                               hex64(before.content_hash()),
                                               cfg.get_double("fluids", "reference_theta", 60.0),
                                               cfg.get_double("fluids", "reference_sigma", 0.072),
                                               report);
                std::printf("appended %s/feedback.csv\n", out.c_str());
            }
        } else if (app.got_subcommand(c_workflow)) {
            const auto result = wf::run_workflow(cfg, verbose);
            if (result.stages_run.empty()) {
                std::printf("all stages up to date\n");
            } else {
                std::printf("stages run:");
                for (const auto& s : result.stages_run) std::printf(" %s", s.c_str());
                std::printf("\n");
            }
            std::printf("%s: %zu artifacts\n", result.manifest_path.c_str(),
                        result.artifacts.size());
        } else if (app.got_subcommand(c_bench)) {
            const auto dims_list = cfg.get_list("bench", "dims", {64.0, 64.0, 64.0});
            if (dims_list.size() != 3) {
                throw Error(ErrorCode::CONFIG_ERROR, "[bench] dims needs three values");
            }
            const std::array<int, 3> dims{static_cast<int>(dims_list[0]),
                                          static_cast<int>(dims_list[1]),
                                          static_cast<int>(dims_list[2])};
            const int steps = cfg.get_int("bench", "steps", 200);
            std::vector<int> worker_list;
            for (double w : cfg.get_list("bench", "workers", {1.0, 2.0, 4.0, 8.0})) {
                worker_list.push_back(static_cast<int>(w));
            }
            const auto result = wf::bench_scaling(dims, steps, worker_list);
            wf::write_bench_csv(result, out + "/bench.csv");
            std::printf("physics gate ok (state hash %s)\n", hex64(result.state_hash).c_str());
            std::printf("%8s %12s %10s %10s %10s\n", "workers", "wall [s]", "MLUPS", "speedup",
                        "efficiency");
            for (const auto& r : result.rows) {
                std::printf("%8d %12.3f %10.2f %10.2f %10.2f\n", r.workers, r.wall_seconds,
                            r.mlups, r.speedup, r.efficiency);
            }
        } else if (app.got_subcommand(c_plot)) {
            for (const auto& path : wf::emit_plots(out)) {
                std::printf("wrote %s\n", path.c_str());
            }
        }
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
    return 0;
}
