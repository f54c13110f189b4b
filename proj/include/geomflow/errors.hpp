#pragma once

#include <stdexcept>
#include <string>

namespace geomflow {

struct NonPositiveDefiniteError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ProfileTooSmallError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ChartExitError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct EmptySeedsError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct RadiusTooLargeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DegenerateGradientError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NonSymmetricError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct EmptyContourError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct BlowUpError : std::runtime_error {
    int node_i, node_j;
    double at_time;
    BlowUpError(const std::string& msg, int i, int j, double t)
        : std::runtime_error(msg), node_i(i), node_j(j), at_time(t) {}
};

struct FormatError : std::runtime_error {
    long byte_offset;
    FormatError(const std::string& msg, long offset = -1)
        : std::runtime_error(msg), byte_offset(offset) {}
};

}  // namespace geomflow
