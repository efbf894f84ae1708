#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <string>

#include "porefill/curve.hpp"
#include "porefill/units.hpp"

using namespace porefill;
using namespace porefill::unitbridge;

namespace {

std::string temp_path(const std::string& stem) {
    static int counter = 0;
    auto dir = std::filesystem::temp_directory_path() / "porefill_units_tests";
    std::filesystem::create_directories(dir);
    return (dir / (stem + "_" + std::to_string(counter++))).string();
}

PressureSaturationCurve random_staircase(std::mt19937_64& rng, int min_points = 5,
                                         int max_points = 15) {
    const int n = min_points + static_cast<int>(uniform_in(rng, 0, max_points - min_points));
    PressureSaturationCurve c;
    double p = uniform_in(rng, 50.0, 500.0);
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
        p += uniform_in(rng, 10.0, 200.0);
        s += uniform_in(rng, 0.01, 0.3);
        c.points.push_back({p, s});
    }
    for (auto& pt : c.points) pt.saturation /= s;  // last point lands at 1
    return c;
}

PressureSaturationCurve scaled(const PressureSaturationCurve& c, double factor) {
    PressureSaturationCurve out = c;
    for (auto& pt : out.points) pt.pressure *= factor;
    return out;
}

}  // namespace

TEST_CASE("build_units reproduces the anchor formulas") {
    const UnitSystem u = build_units(10.0, 5.0, 0.072, 0.12, 1e-6, 1.0 / 6.0);
    CHECK(u.dx == doctest::Approx(2e-6).epsilon(1e-12));
    CHECK(u.dt == doctest::Approx((1.0 / 6.0) * 4e-12 / 1e-6).epsilon(1e-12));
    CHECK(u.pressure_scale == doctest::Approx(0.072 / (0.12 * 2e-6)).epsilon(1e-12));
}

TEST_CASE("build_units rejects non-positive inputs") {
    const double ok[6] = {10.0, 5.0, 0.072, 0.12, 1e-6, 1.0 / 6.0};
    for (int slot = 0; slot < 6; ++slot) {
        double args[6];
        std::copy(std::begin(ok), std::end(ok), std::begin(args));
        for (double bad : {0.0, -1.0, std::nan("")}) {
            args[slot] = bad;
            CAPTURE(slot);
            CAPTURE(bad);
            try {
                build_units(args[0], args[1], args[2], args[3], args[4], args[5]);
                FAIL("expected NONPOSITIVE_INPUT");
            } catch (const Error& e) {
                CHECK(e.code() == ErrorCode::NONPOSITIVE_INPUT);
            }
        }
    }
}

TEST_CASE("convert_curve scales pressures and keeps saturations") {
    PressureSaturationCurve c;
    c.points = {{0.001, 0.2}, {0.004, 0.9}};
    UnitSystem u;
    u.pressure_scale = 3e5;
    const auto out = convert_curve(c, u);
    CHECK(out.points[0].pressure == doctest::Approx(300.0));
    CHECK(out.points[1].pressure == doctest::Approx(1200.0));
    CHECK(out.points[0].saturation == 0.2);
    CHECK(out.points[1].saturation == 0.9);
}

TEST_CASE("objective matches a hand-integrated staircase mismatch") {
    PressureSaturationCurve c;
    c.points = {{1.0, 0.2}, {2.0, 0.6}, {3.0, 1.0}};
    CHECK(calibration_objective(c, c, 1.0) == doctest::Approx(0.0));
    // k = 1.2: support [1.2, 3]; the curves disagree only on [2, 2.4] where
    // the mismatch is 0.4, so RMS = sqrt(0.16 * 0.4 / 1.8).
    CHECK(calibration_objective(c, c, 1.2) ==
          doctest::Approx(std::sqrt(0.16 * 0.4 / 1.8)).epsilon(1e-9));
    CHECK(std::isinf(calibration_objective(c, c, 1e6)));
}

TEST_CASE("self-calibration returns unit correction") {
    std::mt19937_64 rng(91);
    for (int rep = 0; rep < 10; ++rep) {
        const auto c = random_staircase(rng);
        const auto calib = calibrate_pnm(c, c);
        CHECK(std::abs(calib.pressure_scale_correction - 1.0) < 1e-3);
        CHECK(calib.residual < 1e-6);
    }
}

TEST_CASE("halved pressure axis is recovered as k = 0.5") {
    std::mt19937_64 rng(92);
    for (int rep = 0; rep < 10; ++rep) {
        const auto lbm = random_staircase(rng);
        const auto pnm = scaled(lbm, 2.0);
        const auto calib = calibrate_pnm(lbm, pnm);
        CHECK(std::abs(calib.pressure_scale_correction - 0.5) < 0.005);
        CHECK(calib.residual < 1e-6);
    }
}

TEST_CASE("fitted correction is locally and probe-wise optimal") {
    std::mt19937_64 rng(93);
    const auto lbm = random_staircase(rng);
    const auto pnm = scaled(lbm, 3.7);
    const auto calib = calibrate_pnm(lbm, pnm);
    const double fbest = calibration_objective(lbm, pnm, calib.pressure_scale_correction);
    CHECK(calib.residual == doctest::Approx(fbest).epsilon(1e-9));
    for (int i = 0; i < 64; ++i) {
        const double k = std::pow(10.0, -2.0 + 4.0 * i / 63.0);
        CHECK(fbest <= calibration_objective(lbm, pnm, k) + 1e-12);
    }
    for (double delta : {1e-4, 1e-3, 1e-2}) {
        CHECK(fbest <= calibration_objective(
                           lbm, pnm, calib.pressure_scale_correction * (1 + delta)) +
                           1e-12);
        CHECK(fbest <= calibration_objective(
                           lbm, pnm, calib.pressure_scale_correction * (1 - delta)) +
                           1e-12);
    }
}

TEST_CASE("disjoint saturation ranges are rejected") {
    PressureSaturationCurve low, high;
    low.points = {{1.0, 0.05}, {2.0, 0.2}};
    high.points = {{1.0, 0.8}, {2.0, 1.0}};
    try {
        calibrate_pnm(low, high);
        FAIL("expected NO_OVERLAP");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NO_OVERLAP);
    }
    PressureSaturationCurve empty;
    CHECK_THROWS_AS(calibrate_pnm(empty, high), Error);
    CHECK_THROWS_AS(calibrate_pnm(low, empty), Error);
}

TEST_CASE("calibration report lists k, residual and input hashes") {
    std::mt19937_64 rng(94);
    const auto lbm = random_staircase(rng);
    const auto pnm = scaled(lbm, 2.0);
    const std::string lbm_path = temp_path("lbm") + ".csv";
    const std::string pnm_path = temp_path("pnm") + ".csv";
    write_curve_csv(lbm, lbm_path);
    write_curve_csv(pnm, pnm_path);

    const auto calib = calibrate_pnm(lbm, pnm);
    const std::string report = temp_path("calibration") + ".txt";
    write_calibration_report(calib, report, lbm_path, pnm_path);

    std::ifstream in(report);
    REQUIRE(in.good());
    std::string line;
    std::getline(in, line);
    CHECK(line.rfind("k=", 0) == 0);
    CHECK(std::stod(line.substr(2)) == doctest::Approx(calib.pressure_scale_correction));
    std::getline(in, line);
    CHECK(line.rfind("residual=", 0) == 0);
    std::getline(in, line);
    CHECK(line == "lbm_curve_hash=" + hex64(hash_file(lbm_path)));
    std::getline(in, line);
    CHECK(line == "pnm_curve_hash=" + hex64(hash_file(pnm_path)));
}

TEST_CASE("curve csv roundtrip preserves every sample") {
    std::mt19937_64 rng(95);
    const auto c = random_staircase(rng);
    const std::string path = temp_path("curve") + ".csv";
    write_curve_csv(c, path);

    std::ifstream in(path);
    std::string header;
    std::getline(in, header);
    CHECK(header == "pressure_pa,saturation");

    const auto back = read_curve_csv(path);
    REQUIRE(back.points.size() == c.points.size());
    for (std::size_t i = 0; i < c.points.size(); ++i) {
        CHECK(back.points[i].pressure == doctest::Approx(c.points[i].pressure).epsilon(1e-14));
        CHECK(back.points[i].saturation ==
              doctest::Approx(c.points[i].saturation).epsilon(1e-14));
    }
    CHECK_THROWS_AS(read_curve_csv(temp_path("missing") + ".csv"), Error);
}

TEST_CASE("saturation_at is a right-continuous step") {
    PressureSaturationCurve c;
    c.points = {{1.0, 0.3}, {2.0, 0.7}};
    CHECK(c.saturation_at(0.5) == 0.0);
    CHECK(c.saturation_at(1.0) == 0.3);
    CHECK(c.saturation_at(1.999) == 0.3);
    CHECK(c.saturation_at(2.0) == 0.7);
    CHECK(c.saturation_at(99.0) == 0.7);
    CHECK(c.min_pressure() == 1.0);
    CHECK(c.max_pressure() == 2.0);
    CHECK(c.min_saturation() == 0.3);
    CHECK(c.max_saturation() == 0.7);
}
