#pragma once

#include <stdexcept>
#include <string>

namespace usbone {

/// Thrown for bad user input (files, config values, argument contracts).
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw ValidationError(msg);
}

} // namespace usbone
