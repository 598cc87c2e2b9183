// errors.hpp — exception taxonomy shared by all qept modules.
#pragma once

#include <stdexcept>
#include <string>

namespace qept {

// Root of the library's exception hierarchy. Every throw below carries a
// human-readable message naming the offending quantity.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ----------------------------- linalg ------------------------------------
struct NotSquareError : Error { using Error::Error; };
struct NotHermitianError : Error { using Error::Error; };
struct DimensionMismatchError : Error { using Error::Error; };
struct DomainError : Error { using Error::Error; };

// ----------------------------- qstate ------------------------------------
struct InvalidStateError : Error { using Error::Error; };
struct NonFiniteBetaError : Error { using Error::Error; };

// ----------------------------- davies ------------------------------------
struct DegenerateSpectrumError : Error { using Error::Error; };
struct NegativeRateError : Error { using Error::Error; };
struct DegenerateBohrError : Error { using Error::Error; };
struct StepTooLargeError : Error { using Error::Error; };

// --------------------------- thermalops ----------------------------------
struct NonCommutingPotentialError : Error { using Error::Error; };

// -------------------------- trajectories ---------------------------------
struct EnumerationTooLargeError : Error { using Error::Error; };
struct ZeroProbabilityOnSupportError : Error { using Error::Error; };

// ------------------------------ cli --------------------------------------
struct ParseError : Error { using Error::Error; };
struct ValidationError : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };

} // namespace qept
