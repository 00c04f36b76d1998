#pragma once

#include <stdexcept>
#include <string>

namespace qotto {

// Invalid physical or numerical parameters (bad config keys, violated
// preconditions). CLI maps this to exit code 2.
class ConfigError : public std::invalid_argument {
public:
    explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

// A computation failed (integrator could not reach its accuracy target,
// sweep row error). CLI maps this to exit code 3.
class ComputeError : public std::runtime_error {
public:
    explicit ComputeError(const std::string& what) : std::runtime_error(what) {}
};

// File system failure. CLI maps this to exit code 4.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace qotto
