#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <array>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "porefill/calibration.hpp"
#include "porefill/lattice.hpp"
#include "porefill/voxel_image.hpp"

using namespace porefill;
using namespace porefill::lbm;
using voxelgrid::classify_solid;
using voxelgrid::Label;
using voxelgrid::VoxelImage;

namespace {

std::string temp_path(const std::string& stem) {
    static int counter = 0;
    auto dir = std::filesystem::temp_directory_path() / "porefill_lbm_tests";
    std::filesystem::create_directories(dir);
    return (dir / (stem + "_" + std::to_string(counter++))).string();
}

LatticeOptions periodic_box() {
    LatticeOptions opt;
    opt.periodic = {true, true, true};
    return opt;
}

// Solid block with a rectangular channel along x, classified.
VoxelImage channel_image(int nx = 12, int ny = 6, int nz = 6) {
    VoxelImage img(nx, ny, nz, 1.0, Label::SOLID_BULK);
    for (int z = 1; z < nz - 1; ++z)
        for (int y = 1; y < ny - 1; ++y)
            for (int x = 0; x < nx; ++x)
                img.labels[img.index(x, y, z)] = Label::PORE;
    return classify_solid(img);
}

VoxelImage classified_pack(int n, std::uint64_t seed) {
    return classify_solid(voxelgrid::generate_sphere_pack(n, n, n, 1.0, 2.5, 0.5, 0.6, seed));
}

void seed_noise(Lattice& lat, const VoxelImage& img, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    for (int z = 0; z < img.nz; ++z)
        for (int y = 0; y < img.ny; ++y)
            for (int x = 0; x < img.nx; ++x) {
                if (voxelgrid::is_solid(img.labels[img.index(x, y, z)])) continue;
                lat.set_density(0, x, y, z, 0.5 + 0.02 * (uniform01(rng) - 0.5));
                lat.set_density(1, x, y, z, 0.5 + 0.02 * (uniform01(rng) - 0.5));
            }
}

}  // namespace

TEST_CASE("velocity set satisfies the D3Q19 moment identities") {
    double wsum = 0.0;
    std::array<double, 3> first{};
    std::array<std::array<double, 3>, 3> second{};
    for (int q = 0; q < kQ; ++q) {
        wsum += kWeight[q];
        for (int a = 0; a < 3; ++a) {
            first[a] += kWeight[q] * kVel[q][a];
            for (int b = 0; b < 3; ++b) second[a][b] += kWeight[q] * kVel[q][a] * kVel[q][b];
        }
        CHECK(kOpposite[kOpposite[q]] == q);
        for (int a = 0; a < 3; ++a) CHECK(kVel[kOpposite[q]][a] == -kVel[q][a]);
    }
    CHECK(wsum == doctest::Approx(1.0).epsilon(1e-15));
    for (int a = 0; a < 3; ++a) {
        CHECK(std::abs(first[a]) < 1e-15);
        for (int b = 0; b < 3; ++b)
            CHECK(second[a][b] == doctest::Approx(a == b ? 1.0 / 3.0 : 0.0).epsilon(1e-15));
    }
}

TEST_CASE("parameter and protocol validation") {
    ShanChenParams p;
    CHECK_NOTHROW(p.validate());
    p.tau_a = 0.5;
    CHECK_THROWS_AS(p.validate(), Error);
    p = ShanChenParams{};
    p.rho_init_b = 0.0;
    CHECK_THROWS_AS(p.validate(), Error);
    p = ShanChenParams{};
    p.g_ab = std::nan("");
    CHECK_THROWS_AS(p.validate(), Error);

    FillProtocol proto;
    proto.pressure_steps = {0.0, 0.1};
    CHECK_NOTHROW(proto.validate());
    proto.pressure_steps = {0.1, 0.1};
    CHECK_THROWS_AS(proto.validate(), Error);
    proto.pressure_steps = {0.0, 0.1};
    proto.steps_per_level = 0;
    CHECK_THROWS_AS(proto.validate(), Error);
    proto = FillProtocol{};
    proto.convergence_tol = 0.0;
    CHECK_THROWS_AS(proto.validate(), Error);
}

TEST_CASE("lattice construction rejects bad geometry") {
    ShanChenParams params;
    VoxelImage solid(6, 6, 6, 1.0, Label::SOLID_BULK);
    CHECK_THROWS_AS(Lattice(solid, params, LatticeOptions{}), Error);

    const VoxelImage raw = voxelgrid::generate_sphere_pack(10, 10, 10, 1.0, 2.5, 0.5, 0.6, 7);
    try {
        init_lattice(raw, params, Face::XMin, Face::XMax);
        FAIL("expected BAD_GEOMETRY for an unclassified image");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::BAD_GEOMETRY);
    }

    const VoxelImage ok = channel_image();
    CHECK_THROWS_AS(init_lattice(ok, params, Face::XMin, Face::XMin), Error);
    CHECK_NOTHROW(init_lattice(ok, params, Face::XMin, Face::XMax));
}

TEST_CASE("active cells cover exactly the open voxels") {
    const VoxelImage img = channel_image();
    std::int64_t open = 0;
    for (auto lab : img.labels)
        if (!voxelgrid::is_solid(lab)) ++open;
    ShanChenParams params;
    Lattice lat(img, params, LatticeOptions{});
    CHECK(lat.active_count() == open);
    CHECK(lat.touched_cells() == lat.active_count());
    // The fixture's solid is all shell, so the boundary rule makes it
    // interface everywhere.
    CHECK(lat.cell_type(0, 0, 0) == CellType::SOLID_INTERFACE);
    CHECK(lat.cell_type(0, 1, 1) == CellType::FLUID);
    CHECK_THROWS_AS(lat.set_density(0, 0, 0, 0, 1.0), Error);
}

TEST_CASE("uniform equilibrium is a fixed point without coupling") {
    VoxelImage img(8, 8, 8, 1.0);
    ShanChenParams params;
    params.g_ab = 0.0;
    Lattice lat(img, params, periodic_box());
    lat.init_equilibrium(0, 0.7, {0.0, 0.0, 0.0});
    lat.init_equilibrium(1, 0.3, {0.0, 0.0, 0.0});
    const auto before = lat.density_field(0);
    lat.run_steps(10);
    const auto after = lat.density_field(0);
    for (std::size_t i = 0; i < before.size(); ++i)
        CHECK(std::abs(after[i] - before[i]) < 1e-14);
    const auto v = lat.velocity(4, 4, 4);
    CHECK(std::abs(v[0]) < 1e-14);
    CHECK(std::abs(v[1]) < 1e-14);
    CHECK(std::abs(v[2]) < 1e-14);
}

TEST_CASE("first moment of the initial equilibrium matches the requested velocity") {
    VoxelImage img(6, 6, 6, 1.0);
    ShanChenParams params;
    Lattice lat(img, params, periodic_box());
    lat.init_equilibrium(0, 0.8, {0.01, 0.0, -0.02});
    lat.init_equilibrium(1, 0.0, {0.0, 0.0, 0.0});
    const auto v = lat.velocity(3, 3, 3);
    CHECK(v[0] == doctest::Approx(0.01).epsilon(1e-10));
    CHECK(std::abs(v[1]) < 1e-12);
    CHECK(v[2] == doctest::Approx(-0.02).epsilon(1e-10));
}

TEST_CASE("pressure follows the two-component equation of state") {
    VoxelImage img(5, 5, 5, 1.0);
    ShanChenParams params;
    Lattice lat(img, params, periodic_box());
    lat.init_equilibrium(0, 0.9, {0.0, 0.0, 0.0});
    lat.init_equilibrium(1, 0.1, {0.0, 0.0, 0.0});
    const double expect = (0.9 + 0.1 + params.g_ab * 0.9 * 0.1) / 3.0;
    CHECK(lat.pressure(2, 2, 2) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("mass is conserved by bounce-back and periodic streaming") {
    ShanChenParams params;

    SUBCASE("walled box") {
        VoxelImage img(12, 12, 12, 1.0);
        Lattice lat(img, params, LatticeOptions{});
        seed_noise(lat, img, 42);
        const double m0a = lat.mass(0), m0b = lat.mass(1);
        lat.run_steps(2000);
        CHECK(std::abs(lat.mass(0) - m0a) / m0a < 1e-12);
        CHECK(std::abs(lat.mass(1) - m0b) / m0b < 1e-12);
        lat.check_health();
    }

    SUBCASE("periodic box") {
        VoxelImage img(10, 10, 10, 1.0);
        Lattice lat(img, params, periodic_box());
        seed_noise(lat, img, 43);
        const double m0a = lat.mass(0), m0b = lat.mass(1);
        lat.run_steps(2000);
        CHECK(std::abs(lat.mass(0) - m0a) / m0a < 1e-12);
        CHECK(std::abs(lat.mass(1) - m0b) / m0b < 1e-12);
    }
}

TEST_CASE("state hash is independent of the worker count") {
    const VoxelImage img = classified_pack(14, 88);
    ShanChenParams params;
    std::vector<std::uint64_t> hashes;
    for (int workers : {1, 2, 3, 5}) {
        Lattice lat = init_lattice(img, params, Face::XMin, Face::XMax);
        lat.set_inlet_offset(0.05);
        lat.run_steps(60, workers);
        hashes.push_back(lat.state_hash());
    }
    for (std::size_t i = 1; i < hashes.size(); ++i) CHECK(hashes[i] == hashes[0]);

    Lattice other = init_lattice(img, params, Face::XMin, Face::XMax);
    other.set_inlet_offset(0.05);
    other.run_steps(61);
    CHECK(other.state_hash() != hashes[0]);
}

TEST_CASE("reservoir layers hold their densities after every step") {
    const VoxelImage img = channel_image();
    ShanChenParams params;
    Lattice lat = init_lattice(img, params, Face::XMin, Face::XMax);
    lat.set_inlet_offset(0.07);
    lat.run_steps(25);
    const auto rho_a = lat.density_field(0);
    const auto rho_b = lat.density_field(1);
    const auto inlet_idx = img.index(0, 2, 2);
    const auto outlet_idx = img.index(img.nx - 1, 2, 2);
    CHECK(rho_a[inlet_idx] == doctest::Approx(params.rho_init_a + 0.07).epsilon(1e-12));
    CHECK(rho_b[inlet_idx] == doctest::Approx(params.rho_minor).epsilon(1e-12));
    CHECK(rho_b[outlet_idx] == doctest::Approx(params.rho_init_b).epsilon(1e-12));
    CHECK(lat.cell_type(0, 2, 2) == CellType::INLET);
    CHECK(lat.cell_type(img.nx - 1, 2, 2) == CellType::OUTLET);
    CHECK(lat.inlet_offset() == 0.07);
    CHECK_THROWS_AS(lat.set_inlet_offset(std::nan("")), Error);
}

TEST_CASE("initial fill state is gas everywhere except the inlet layer") {
    const VoxelImage img = channel_image();
    ShanChenParams params;
    Lattice lat = init_lattice(img, params, Face::XMin, Face::XMax);
    const VoxelImage snap = lat.to_image();
    CHECK(snap.labels[snap.index(0, 2, 2)] == Label::ELECTROLYTE);
    CHECK(snap.labels[snap.index(5, 2, 2)] == Label::GAS);
    CHECK(snap.labels[snap.index(0, 0, 0)] == Label::SOLID_INTERFACE);
    CHECK(snap.labels[snap.index(5, 0, 2)] == Label::SOLID_INTERFACE);
    CHECK(lat.spanning_pore_path());
}

TEST_CASE("spanning query reports a plugged channel") {
    VoxelImage img = channel_image();
    for (int z = 1; z < img.nz - 1; ++z)
        for (int y = 1; y < img.ny - 1; ++y)
            img.labels[img.index(6, y, z)] = Label::SOLID_INTERFACE;
    ShanChenParams params;
    const Lattice lat = init_lattice(img, params, Face::XMin, Face::XMax);
    CHECK(!lat.spanning_pore_path());
}

TEST_CASE("health check flags runaway densities") {
    VoxelImage img(6, 6, 6, 1.0);
    ShanChenParams params;
    Lattice lat(img, params, periodic_box());
    lat.init_equilibrium(0, 1.0, {0.0, 0.0, 0.0});
    lat.init_equilibrium(1, 0.0, {0.0, 0.0, 0.0});
    CHECK_NOTHROW(lat.check_health());
    lat.set_density(0, 3, 3, 3, 2e6);
    try {
        lat.check_health();
        FAIL("expected NUMERIC_BLOWUP");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NUMERIC_BLOWUP);
    }
    lat.set_density(0, 3, 3, 3, std::nan(""));
    CHECK_THROWS_AS(lat.check_health(), Error);
}

TEST_CASE("checkpoint roundtrip restores the state bit-exactly") {
    const VoxelImage img = classified_pack(12, 31);
    ShanChenParams params;
    Lattice a = init_lattice(img, params, Face::XMin, Face::XMax);
    a.set_inlet_offset(0.03);
    a.set_level_index(1);
    a.run_steps(40);
    const std::string path = temp_path("state") + ".lbc";
    a.save_checkpoint(path);

    Lattice b = init_lattice(img, params, Face::XMin, Face::XMax);
    b.load_checkpoint(path);
    CHECK(b.state_hash() == a.state_hash());
    CHECK(b.step_index() == a.step_index());
    CHECK(b.level_index() == 1);
    CHECK(b.inlet_offset() == doctest::Approx(0.03));
    b.run_steps(5);
    a.run_steps(5);
    CHECK(b.state_hash() == a.state_hash());

    SUBCASE("parameter mismatch is refused") {
        ShanChenParams other = params;
        other.g_ab = 1.9;
        Lattice c = init_lattice(img, other, Face::XMin, Face::XMax);
        try {
            c.load_checkpoint(path);
            FAIL("expected BAD_FORMAT");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::BAD_FORMAT);
        }
    }

    SUBCASE("dimension mismatch is refused") {
        const VoxelImage small = classified_pack(10, 31);
        Lattice c = init_lattice(small, params, Face::XMin, Face::XMax);
        CHECK_THROWS_AS(c.load_checkpoint(path), Error);
    }

    SUBCASE("garbage and truncation are refused") {
        const std::string bad = temp_path("garbage") + ".lbc";
        std::ofstream(bad, std::ios::binary) << "not a checkpoint at all";
        Lattice c = init_lattice(img, params, Face::XMin, Face::XMax);
        CHECK_THROWS_AS(c.load_checkpoint(bad), Error);

        std::filesystem::resize_file(path, 64);
        CHECK_THROWS_AS(c.load_checkpoint(path), Error);
    }
}

TEST_CASE("quasi-static fill walks the pressure schedule") {
    const VoxelImage img = channel_image(12, 6, 6);
    ShanChenParams params;
    Lattice lat = init_lattice(img, params, Face::XMin, Face::XMax);

    FillProtocol proto;
    proto.pressure_steps = {0.0, 0.05};
    proto.steps_per_level = 3000;
    proto.convergence_tol = 1e-3;

    const auto result = fill_simulation(lat, proto);
    REQUIRE(result.curve.points.size() == 2);
    CHECK(result.curve.points[0].pressure == 0.0);
    CHECK(result.curve.points[1].pressure == 0.05);
    for (const auto& pt : result.curve.points) {
        CHECK(pt.saturation >= 0.0);
        CHECK(pt.saturation <= 1.0);
    }
    REQUIRE(result.steps_per_level.size() == 2);
    for (int used : result.steps_per_level) {
        CHECK(used > 0);
        CHECK(used <= proto.steps_per_level);
    }
    CHECK(lat.level_index() == 1);

    SUBCASE("resume skips completed levels") {
        Lattice fresh = init_lattice(img, params, Face::XMin, Face::XMax);
        fresh.set_level_index(0);
        const auto tail = fill_simulation(fresh, proto);
        REQUIRE(tail.curve.points.size() == 1);
        CHECK(tail.curve.points[0].pressure == 0.05);
    }
}

TEST_CASE("fill aborts with NUMERIC_BLOWUP on an absurd drive") {
    const VoxelImage img = channel_image(10, 5, 5);
    ShanChenParams params;
    Lattice lat = init_lattice(img, params, Face::XMin, Face::XMax);
    FillProtocol proto;
    proto.pressure_steps = {1e8};
    proto.steps_per_level = 1000;
    try {
        fill_simulation(lat, proto);
        FAIL("expected NUMERIC_BLOWUP");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NUMERIC_BLOWUP);
        CHECK(e.message().find("pressure step 0") != std::string::npos);
    }
}

TEST_CASE("residual gas analysis on a constructed fill state") {
    VoxelImage img(6, 4, 4, 1.0, Label::ELECTROLYTE);
    // Large gas cluster on the inlet face, small one in the interior.
    for (int z = 0; z < 4; ++z)
        for (int y = 0; y < 4; ++y)
            img.labels[img.index(0, y, z)] = Label::GAS;
    img.labels[img.index(3, 1, 1)] = Label::GAS;
    img.labels[img.index(3, 2, 1)] = Label::GAS;
    img.labels[img.index(5, 0, 0)] = Label::SOLID_INTERFACE;

    const auto gas = residual_gas_analysis(img, Face::XMin);
    CHECK(gas.cluster_count == 2);
    REQUIRE(gas.clusters.size() == 2);
    CHECK(gas.clusters[0].voxels == 16);
    CHECK(gas.clusters[0].touches_inlet);
    CHECK(gas.clusters[1].voxels == 2);
    CHECK(!gas.clusters[1].touches_inlet);
    const double open = 6 * 4 * 4 - 1;
    CHECK(gas.final_saturation == doctest::Approx((open - 18) / open));
    CHECK(gas.wetted_solid_fraction == 1.0);
}

TEST_CASE("separation probe discriminates coupled from miscible mixtures") {
    ShanChenParams params;
    CHECK(check_separation(params, 1234, 12, 6000) > 10.0);
    params.g_ab = 1.0;
    CHECK(check_separation(params, 1234, 12, 6000) <= 10.0);
}

TEST_CASE("single droplet obeys the Laplace law") {
    ShanChenParams params;
    const auto res = laplace_test(6.0, params);
    CHECK(res.delta_p > 0.0);
    CHECK(res.radius == doctest::Approx(6.0).epsilon(0.25));
    CHECK(res.sigma_lat > 0.08);
    CHECK(res.sigma_lat < 0.16);
    CHECK(res.steps > 0);
    CHECK_THROWS_AS(laplace_test(1.0, params), Error);
}
