// SPDX-License-Identifier: Apache-2.0
//
// o2i-ris: coverage analysis of RIS-assisted outdoor-to-indoor mmWave links
// ------------------------------------------------------------------------

#ifndef O2I_ERRORS_HPP
#define O2I_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace o2i {

// Every failure the library raises derives from Error. The CLI maps each
// concrete type onto a distinct process exit code.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed config file or unknown key. Carries the offending line when known.
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what, int line = 0)
        : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
    int line() const noexcept { return line_; }

private:
    int line_;
};

/// A parameter or geometry violates a model invariant.
class InvariantError : public Error {
public:
    using Error::Error;
};

/// Sensor at or below the UE antenna height; the dynamic-blockage rate is undefined there.
class DegenerateGeometryError : public InvariantError {
public:
    using InvariantError::InvariantError;
};

/// A path segment leaves the blocker sampling window.
class WindowTooSmallError : public InvariantError {
public:
    using InvariantError::InvariantError;
};

class NumericInstabilityError : public Error {
public:
    using Error::Error;
};

/// Exact subset enumeration requested beyond its size cap.
class CapExceededError : public Error {
public:
    using Error::Error;
};

} // namespace o2i

#endif
