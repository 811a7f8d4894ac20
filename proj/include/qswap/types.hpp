#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace qswap {

using Cx = std::complex<double>;

// Tolerance ladder. Constructed states are checked tightly, operator-level
// identities allow for d^2 accumulation, end-to-end scenario assertions for
// accumulation over up to d^5 terms.
inline constexpr double kStateTol = 1e-12;
inline constexpr double kOpTol = 1e-10;
inline constexpr double kScenarioTol = 1e-9;
inline constexpr double kZeroProb = 1e-14;
inline constexpr double kPhaseTol = 1e-9;

// Names one Hilbert-space slot. All factors of one simulation share a single
// dimension d >= 2, but every factor carries its own dimension so the tensor
// layer stays generic.
using FactorLabel = int;

struct SimError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Label sets collide, are not a subset, or do not match.
struct LabelError : SimError {
    using SimError::SimError;
};

// partial_inner over the full label set; callers want the plain scalar
// product instead.
struct FullContractionError : LabelError {
    using LabelError::LabelError;
};

// Matrix/vector dimensions do not line up.
struct ShapeError : SimError {
    using SimError::SimError;
};

// Linear map handed to an operation that is defined for antilinear ones
// (or vice versa).
struct ParityError : SimError {
    using SimError::SimError;
};

// A state fails the maximal-entanglement test; carries the measured
// deviation of the reduced density matrix from 1/d.
struct EntanglementError : SimError {
    EntanglementError(const std::string& what, double deviation)
        : SimError(what), deviation(deviation) {}
    double deviation;
};

// A projector family is not orthogonal or does not resolve the identity.
struct CompletenessError : SimError {
    using SimError::SimError;
};

}  // namespace qswap
