#pragma once

#include <stdexcept>
#include <string>

namespace tumsim {

// Error categories map onto the CLI exit codes: config -> 1, solver -> 2, io -> 3.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

struct SolverError : std::runtime_error {
    explicit SolverError(const std::string& msg) : std::runtime_error(msg) {}
};

struct IoError : std::runtime_error {
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

// Raised when a simulation ends because the tumour domain became empty.
// This is a legitimate outcome (total necrosis), not a failure.
struct TumourExtinct : std::runtime_error {
    int step;
    explicit TumourExtinct(int n)
        : std::runtime_error("tumour extinct at step " + std::to_string(n)), step(n) {}
};

} // namespace tumsim
