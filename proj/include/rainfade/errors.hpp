#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rainfade {

/// Raised when input data (CSV archives, registry documents) cannot be
/// parsed. Carries the 1-based line number when one is known.
class parse_error : public std::runtime_error {
public:
    explicit parse_error(const std::string& message, std::size_t line = 0)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message
                                      : message),
          line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Raised when parsed data violates a documented constraint (negative
/// rainfall, thunderstorm ratio outside [0,1], wrong field count, ...).
class validation_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised when a station name is not present in the registry.
class station_not_found : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace rainfade
