#pragma once

#include <stdexcept>
#include <string>

namespace saf {

// Failure categories shared by every module. The numeric values are part of
// the C API (saf.h mirrors them) and must not be reordered.
enum class ErrorCode : int {
    Ok = 0,
    PoleAtAtom = 1,
    DegenerateValue = 2,
    NonConvergent = 3,
    NotHermitian = 4,
    DependentFunctionals = 5,
    DimensionMismatch = 6,
    ShootingBlowup = 7,
    CharacteristicZero = 8,
    InvalidData = 9,
    NearEigenvalue = 10,
    AtomInWindow = 11,
    AtomCollision = 12,
    ConfigError = 13,
    Internal = 99,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace saf
