// Shared plumbing: error codes, axis faces, deterministic RNG helpers,
// FNV-1a hashing and number formatting used across the toolkit.

#pragma once

#include <charconv>
#include <cstdint>
#include <cstring>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace porefill {

enum class ErrorCode {
    UNREACHABLE_POROSITY,
    BAD_GEOMETRY,
    BAD_FORMAT,
    NO_PORE_PHASE,
    EMPTY_NETWORK,
    NO_INLET_PORES,
    NO_FLUID_CELLS,
    NONPOSITIVE_INPUT,
    NO_OVERLAP,
    NONPERCOLATING,
    NUMERIC_BLOWUP,
    NOT_CONVERGED,
    MISSING_ARTIFACT,
    RESULT_MISMATCH,
    CONFIG_ERROR,
    IO_ERROR,
};

const char* to_string(ErrorCode code);

// Single exception type; the CLI maps code categories onto exit codes.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what),
          code_(code),
          message_(what) {}
    ErrorCode code() const { return code_; }
    const std::string& message() const { return message_; }  // without code prefix

private:
    ErrorCode code_;
    std::string message_;
};

enum class Face : int { XMin = 0, XMax, YMin, YMax, ZMin, ZMax };

inline int face_axis(Face f) { return static_cast<int>(f) / 2; }
inline bool face_is_min(Face f) { return static_cast<int>(f) % 2 == 0; }
inline Face opposite_face(Face f) {
    int i = static_cast<int>(f);
    return static_cast<Face>(i % 2 == 0 ? i + 1 : i - 1);
}

const char* face_name(Face f);
Face face_from_name(const std::string& name);  // throws CONFIG_ERROR

// --- deterministic random helpers -----------------------------------------
//
// mt19937_64 output is fully specified by the standard; the distributions are
// not. These helpers pin the mapping so identical seeds give identical
// structures on every platform.

inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform_in(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * uniform01(rng);
}

// Marsaglia polar method, fixed rejection order.
double normal(std::mt19937_64& rng, double mean, double sd);

// --- FNV-1a 64-bit ---------------------------------------------------------

class Fnv1a64 {
public:
    void update(const void* data, std::size_t n) {
        const auto* p = static_cast<const unsigned char*>(data);
        for (std::size_t i = 0; i < n; ++i) {
            state_ ^= p[i];
            state_ *= 0x100000001b3ULL;
        }
    }
    template <typename T>
    void update_value(const T& v) {
        static_assert(std::is_trivially_copyable_v<T>);
        update(&v, sizeof(T));
    }
    std::uint64_t digest() const { return state_; }

private:
    std::uint64_t state_ = 0xcbf29ce484222325ULL;
};

std::uint64_t hash_bytes(const void* data, std::size_t n);
std::uint64_t hash_file(const std::string& path);  // throws IO_ERROR

std::string hex64(std::uint64_t v);

// Shortest decimal representation that round-trips the double exactly.
std::string format_double(double v);

std::vector<std::string> split(const std::string& s, char sep);
std::string trim(const std::string& s);

}  // namespace porefill
