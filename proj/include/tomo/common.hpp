#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace tomo {

// Error taxonomy shared across the library. Everything derives from Error so
// the CLI can map user-facing failures to exit codes in one place.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct ZeroNormError : Error {
    using Error::Error;
};
struct SingularStateError : Error {
    using Error::Error;
};
struct ConfigError : Error {
    using Error::Error;
};
struct DegenerateDesignError : Error {
    using Error::Error;
};
struct AllMissingError : Error {
    using Error::Error;
};
struct ShapeMismatchError : Error {
    using Error::Error;
};
struct DivergenceError : Error {
    using Error::Error;
};
struct UndefinedMetricError : Error {
    using Error::Error;
};
struct RankDeficientError : Error {
    using Error::Error;
};
struct IoError : Error {
    using Error::Error;
};
struct SchemaError : Error {
    using Error::Error;
};

// Missing measurement cells are carried as quiet NaN both in memory and in
// the binary container format.
inline double missing_value() { return std::numeric_limits<double>::quiet_NaN(); }

inline bool is_missing(double x) { return std::isnan(x); }

inline double clamp01(double x) {
    if (x < 0.0) return 0.0;
    if (x > 1.0) return 1.0;
    return x;
}

constexpr int kNumMeasurements = 36;
constexpr int kNumTau = 16;

}  // namespace tomo
