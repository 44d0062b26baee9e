#include "saf/error.hpp"

namespace saf {

const char* to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::Ok: return "Ok";
    case ErrorCode::PoleAtAtom: return "PoleAtAtom";
    case ErrorCode::DegenerateValue: return "DegenerateValue";
    case ErrorCode::NonConvergent: return "NonConvergent";
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::DependentFunctionals: return "DependentFunctionals";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::ShootingBlowup: return "ShootingBlowup";
    case ErrorCode::CharacteristicZero: return "CharacteristicZero";
    case ErrorCode::InvalidData: return "InvalidData";
    case ErrorCode::NearEigenvalue: return "NearEigenvalue";
    case ErrorCode::AtomInWindow: return "AtomInWindow";
    case ErrorCode::AtomCollision: return "AtomCollision";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::Internal: return "Internal";
    }
    return "Unknown";
}

} // namespace saf
