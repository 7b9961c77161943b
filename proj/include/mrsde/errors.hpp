#pragma once

#include <stdexcept>
#include <string>

namespace mrsde {

// Raised for invalid configurations and violated preconditions.  The CLI
// maps this to exit code 2.
class invalid_config_error : public std::runtime_error {
public:
    explicit invalid_config_error(const std::string& what) : std::runtime_error(what) {}
};

// Raised when a computation fails at runtime (bracket failure, length
// mismatch, non-finite input).  The CLI maps this to exit code 3.
class numerical_error : public std::runtime_error {
public:
    explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace mrsde
