#pragma once

#include <stdexcept>
#include <string>

namespace qmeas {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DimensionMismatch : Error {
    using Error::Error;
};

/// Input vectors are linearly dependent (or a state has zero norm).
struct DegenerateInput : Error {
    using Error::Error;
};

/// Operator fails the Hermiticity tolerance.
struct NotHermitian : Error {
    using Error::Error;
};

/// Operator fails the idempotency (A^2 = A) tolerance.
struct NotIdempotent : Error {
    using Error::Error;
};

/// |<psi_f|psi_i>| is below the overlap tolerance.
struct OrthogonalPostSelection : Error {
    using Error::Error;
};

/// Wavepacket support leaves the position grid (or would wrap around).
struct GridContainment : Error {
    using Error::Error;
};

/// Post-selection success probability underflows.
struct PostSelectionFailure : Error {
    using Error::Error;
};

/// Sensitivity denominator vanishes (e.g. M = p, where [M,p] = 0).
struct UndefinedSensitivity : Error {
    using Error::Error;
};

/// First-order-corrected variance went negative; the weak expansion broke down.
struct InvalidRegime : Error {
    using Error::Error;
};

/// Experiment configuration is invalid; message names the offending field.
struct ConfigError : Error {
    using Error::Error;
};

} // namespace qmeas
