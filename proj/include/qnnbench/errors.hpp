#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace qnn {

// Error taxonomy shared by every module. Callers that want to distinguish
// failure classes catch the subtype; everything derives from qnn::error.
class error : public std::runtime_error {
public:
    explicit error(const std::string& msg) : std::runtime_error(msg) {}
};

// Resource limits: register width, enumeration caps, integer overflow.
class capacity_error : public error {
public:
    using error::error;
};

// Violated call preconditions: slot counts, dimension mismatches, bad arguments.
class contract_error : public error {
public:
    using error::error;
};

// Architecture constraints: block width not dividing the register, unsupported shapes.
class architecture_error : public error {
public:
    using error::error;
};

// Malformed input files (snapshot archives, CSVs).
class format_error : public error {
public:
    using error::error;
};

// Bad configuration files: unknown keys, missing keys, out-of-range values.
class config_error : public error {
public:
    using error::error;
};

// Singular covariance that regularization could not rescue, degenerate scaling.
class degeneracy_error : public error {
public:
    using error::error;
};

// Sampling grids too coarse for the requested bandwidth.
class aliasing_error : public error {
public:
    using error::error;
};

// Training reached a non-finite loss. Carries enough state for a harness to
// record the run at its last finite value instead of losing it.
class divergence_error : public error {
public:
    divergence_error(const std::string& msg, int epoch,
                     std::vector<double> finite_history,
                     std::vector<double> last_theta)
        : error(msg),
          epoch(epoch),
          finite_history(std::move(finite_history)),
          last_theta(std::move(last_theta)) {}

    int epoch;
    std::vector<double> finite_history;  // per-epoch losses before the blow-up
    std::vector<double> last_theta;
};

}  // namespace qnn
