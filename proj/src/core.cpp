#include "porefill/core.hpp"

#include <array>
#include <cmath>
#include <fstream>

namespace porefill {

const char* to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::UNREACHABLE_POROSITY: return "UNREACHABLE_POROSITY";
        case ErrorCode::BAD_GEOMETRY: return "BAD_GEOMETRY";
        case ErrorCode::BAD_FORMAT: return "BAD_FORMAT";
        case ErrorCode::NO_PORE_PHASE: return "NO_PORE_PHASE";
        case ErrorCode::EMPTY_NETWORK: return "EMPTY_NETWORK";
        case ErrorCode::NO_INLET_PORES: return "NO_INLET_PORES";
        case ErrorCode::NO_FLUID_CELLS: return "NO_FLUID_CELLS";
        case ErrorCode::NONPOSITIVE_INPUT: return "NONPOSITIVE_INPUT";
        case ErrorCode::NO_OVERLAP: return "NO_OVERLAP";
        case ErrorCode::NONPERCOLATING: return "NONPERCOLATING";
        case ErrorCode::NUMERIC_BLOWUP: return "NUMERIC_BLOWUP";
        case ErrorCode::NOT_CONVERGED: return "NOT_CONVERGED";
        case ErrorCode::MISSING_ARTIFACT: return "MISSING_ARTIFACT";
        case ErrorCode::RESULT_MISMATCH: return "RESULT_MISMATCH";
        case ErrorCode::CONFIG_ERROR: return "CONFIG_ERROR";
        case ErrorCode::IO_ERROR: return "IO_ERROR";
    }
    return "UNKNOWN";
}

namespace {
constexpr std::array<const char*, 6> kFaceNames = {"xmin", "xmax", "ymin",
                                                   "ymax", "zmin", "zmax"};
}

const char* face_name(Face f) { return kFaceNames[static_cast<int>(f)]; }

Face face_from_name(const std::string& name) {
    for (int i = 0; i < 6; ++i) {
        if (name == kFaceNames[i]) return static_cast<Face>(i);
    }
    throw Error(ErrorCode::CONFIG_ERROR, "unknown face '" + name + "'");
}

double normal(std::mt19937_64& rng, double mean, double sd) {
    // Polar rejection; draws come in a fixed order so results are
    // reproducible for a given seed.
    double u, v, s;
    do {
        u = 2.0 * uniform01(rng) - 1.0;
        v = 2.0 * uniform01(rng) - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    return mean + sd * u * std::sqrt(-2.0 * std::log(s) / s);
}

std::uint64_t hash_bytes(const void* data, std::size_t n) {
    Fnv1a64 h;
    h.update(data, n);
    return h.digest();
}

std::uint64_t hash_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IO_ERROR, "cannot open " + path);
    Fnv1a64 h;
    char buf[1 << 16];
    while (in) {
        in.read(buf, sizeof(buf));
        h.update(buf, static_cast<std::size_t>(in.gcount()));
    }
    return h.digest();
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    static const char* digits = "0123456789abcdef";
    for (int i = 15; i >= 0; --i) {
        buf[i] = digits[v & 0xf];
        v >>= 4;
    }
    buf[16] = '\0';
    return std::string(buf);
}

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = s.find(sep, start);
        if (pos == std::string::npos) {
            out.push_back(s.substr(start));
            break;
        }
        out.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

}  // namespace porefill
