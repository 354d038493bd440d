#pragma once

#include <stdexcept>
#include <string>

namespace tasac {

/// Invalid configuration: bad dimensions, out-of-range parameters, malformed files.
struct config_error : std::runtime_error {
    explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

/// API misuse: calling an operation outside its valid state (e.g. stepping a finished batch).
struct usage_error : std::logic_error {
    explicit usage_error(const std::string& what) : std::logic_error(what) {}
};

/// The ODE integrator produced a non-finite state; the episode must be aborted.
struct integration_error : std::runtime_error {
    explicit integration_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace tasac
