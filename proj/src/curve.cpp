#include "porefill/curve.hpp"

#include <algorithm>
#include <fstream>
#include <limits>

namespace porefill {

double PressureSaturationCurve::saturation_at(double p) const {
    double s = 0.0;
    for (const auto& pt : points) {
        if (pt.pressure <= p)
            s = pt.saturation;
        else
            break;
    }
    return s;
}

double PressureSaturationCurve::min_pressure() const {
    return points.empty() ? std::numeric_limits<double>::quiet_NaN() : points.front().pressure;
}

double PressureSaturationCurve::max_pressure() const {
    return points.empty() ? std::numeric_limits<double>::quiet_NaN() : points.back().pressure;
}

double PressureSaturationCurve::min_saturation() const {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& pt : points) m = std::min(m, pt.saturation);
    return m;
}

double PressureSaturationCurve::max_saturation() const {
    double m = -std::numeric_limits<double>::infinity();
    for (const auto& pt : points) m = std::max(m, pt.saturation);
    return m;
}

void write_curve_csv(const PressureSaturationCurve& curve, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::IO_ERROR, "cannot write " + path);
    out << "pressure_pa,saturation\n";
    for (const auto& pt : curve.points)
        out << format_double(pt.pressure) << ',' << format_double(pt.saturation) << '\n';
}

PressureSaturationCurve read_curve_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IO_ERROR, "cannot open " + path);
    std::string line;
    if (!std::getline(in, line) || trim(line) != "pressure_pa,saturation")
        throw Error(ErrorCode::BAD_FORMAT, "bad curve header in " + path);
    PressureSaturationCurve curve;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        auto cols = split(trim(line), ',');
        if (cols.size() != 2) throw Error(ErrorCode::BAD_FORMAT, "bad curve row: " + line);
        curve.points.push_back({std::stod(cols[0]), std::stod(cols[1])});
    }
    for (std::size_t i = 1; i < curve.points.size(); ++i)
        if (curve.points[i].pressure < curve.points[i - 1].pressure)
            throw Error(ErrorCode::BAD_FORMAT, "curve pressures not ascending in " + path);
    return curve;
}

}  // namespace porefill
