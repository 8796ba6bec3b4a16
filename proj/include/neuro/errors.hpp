#ifndef NEURO_ERRORS_HPP
#define NEURO_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace neuro {

// Error taxonomy shared across the library. Callers that need to distinguish
// bad user input (exit code 1) from runtime failures (exit code 2) catch the
// specific types; everything derives from neuro::Error.

struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed or out-of-range configuration values.
struct ConfigError : Error {
    explicit ConfigError(const std::string& what) : Error(what) {}
};

// Genome / mask / network dimension mismatches.
struct ShapeError : Error {
    explicit ShapeError(const std::string& what) : Error(what) {}
};

// Bad arguments to an operation (indices out of range, empty samples, ...).
struct InputError : Error {
    explicit InputError(const std::string& what) : Error(what) {}
};

// Operation called in a state that does not admit it (stepping a finished
// episode, selecting elites before fitness exists, ...).
struct StateError : Error {
    explicit StateError(const std::string& what) : Error(what) {}
};

// Filesystem and serialization failures.
struct IoError : Error {
    explicit IoError(const std::string& what) : Error(what) {}
};

} // namespace neuro

#endif
