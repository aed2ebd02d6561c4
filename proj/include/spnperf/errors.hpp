#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace spnperf {

struct SpnError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Model construction / input file problems. CLI exit code 2.
struct ValidationError : SpnError {
    using SpnError::SpnError;
};

struct GuardParseError : ValidationError {
    GuardParseError(const std::string& what, std::size_t pos)
        : ValidationError(what + " (at position " + std::to_string(pos) + ")"), position(pos) {}
    std::size_t position;
};

struct UnknownIdError : ValidationError {
    UnknownIdError(const std::string& what, std::string bad_id)
        : ValidationError(what), id(std::move(bad_id)) {}
    std::string id;
};

struct FiringDisabledError : SpnError {
    using SpnError::SpnError;
};

// Immediate-transition cycle with no timed exit (or >1e6 zero-time firings in simulation).
struct VanishingLoopError : SpnError {
    using SpnError::SpnError;
};

// Reachability exploration hit the configured state cap. CLI exit code 3.
struct StateSpaceExceededError : SpnError {
    explicit StateSpaceExceededError(std::size_t max_states)
        : SpnError("state space exceeds configured maximum of " + std::to_string(max_states) + " states"),
          limit(max_states) {}
    std::size_t limit;
};

// Iterative steady-state solve ran out of iterations. CLI exit code 4.
struct NonconvergenceError : SpnError {
    explicit NonconvergenceError(std::size_t iters)
        : SpnError("steady-state solve did not reach tolerance within " + std::to_string(iters) + " iterations"),
          iterations(iters) {}
    std::size_t iterations;
};

}  // namespace spnperf
