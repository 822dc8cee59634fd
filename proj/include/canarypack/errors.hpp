#pragma once

#include <stdexcept>
#include <string>

namespace canarypack {

// Error taxonomy shared by the library and the CLI. The CLI maps each
// class to a stable diagnostic prefix and exit code.

// A record violates one of its structural invariants.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Inconsistent or out-of-range configuration (K < 2, mismatched partitions, ...).
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Failures while building a release (poison budget, synthesis, trigger collisions).
class PreparationError : public std::runtime_error {
public:
    explicit PreparationError(const std::string& what) : std::runtime_error(what) {}
};

// Failures while verifying responses against a manifest (missing ids, empty triggers).
class VerificationError : public std::runtime_error {
public:
    explicit VerificationError(const std::string& what) : std::runtime_error(what) {}
};

class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace canarypack
