#pragma once

#include <stdexcept>
#include <string>

namespace trimlab {

// Orbit landed exactly on a singular point (measure zero in the exact
// models); the replica is discarded and counted.
struct DegenerateHit : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct WrongRegime : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct InsufficientPoints : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct QuadratureFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RootFindFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InsufficientTail : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace trimlab
