#pragma once

#include "qswap/ket.hpp"
#include "qswap/matrix.hpp"
#include "qswap/types.hpp"

namespace qswap {

// Parity-tagged map between two factor labels. A linear isometry sends
// v to M v, an antilinear one sends v to M conj(v); M is unitary in both
// cases. Maximally entangled pair states and antilinear isometries are two
// views of the same object: the pair state carried by an antilinear I has
// amplitudes amp(i at from, j at to) = M[j][i]/sqrt(d), which is what makes
// the identity matrix correspond to the (|00>+|11>+...)/sqrt(d) state in
// every dimension.
struct Isometry {
    FactorLabel from;  // domain label
    FactorLabel to;    // range label
    int dim;
    Matrix m;
    bool antilinear;

    Isometry(FactorLabel from, FactorLabel to, int dim, Matrix m, bool antilinear);

    static Isometry identity(FactorLabel from, FactorLabel to, int dim, bool antilinear = true);
    // v |-> shift matrix applied after conjugation; the pair state pairs
    // |i> at `from` with |i+1 mod d> at `to`.
    static Isometry shift(FactorLabel from, FactorLabel to, int dim);

    std::vector<Cx> operator()(const std::vector<Cx>& v) const;
};

// Map composition: `first` acts, then `second`; requires first.to ==
// second.from. Antilinearity flags XOR; the matrix is M2 * M1 when `second`
// is linear and M2 * conj(M1) when it is antilinear.
Isometry compose(const Isometry& second, const Isometry& first);

// Inverse map; swaps from/to and preserves the parity flag.
Isometry invert(const Isometry& iso);

// The maximally entangled normalized pair state on (from, to) determined by
// an antilinear isometry; sum over any orthonormal basis gives the same
// state (that is what the antilinearity buys).
Ket state_from_isometry(const Isometry& iso);
// Same sum evaluated in the basis given by the columns of `onb`; used to
// exercise the basis-independence property.
Ket state_from_isometry_in_basis(const Isometry& iso, const Matrix& onb);

// Recovers the antilinear isometry with the given domain label from a
// maximally entangled two-factor state; exact inverse of state_from_isometry
// up to floating-point rounding. Throws EntanglementError when the reduced
// state on `from` deviates from 1/d by more than kScenarioTol.
Isometry isometry_from_state(const Ket& pair, FactorLabel from);
// Convenience overload: domain defaults to the lower label.
Isometry isometry_from_state(const Ket& pair);

// Composes a unitary on the domain into an antilinear isometry: the result
// is I after U. The same map can be written with the unitary moved to the
// range side via commuted_to_range().
Isometry conjugation_transport(const Isometry& iso, const Matrix& u);

// The operator W on the range factor with I after U == W after I, namely
// M conj(U) M^dagger. Expressed in the basis transported by I, W is the
// entrywise conjugate of U.
Matrix commuted_to_range(const Isometry& iso, const Matrix& u);

struct IsoPhaseCompare {
    enum class Reason { match, label_mismatch, parity_mismatch, dim_mismatch, support_mismatch, entry_mismatch };
    bool equal = false;
    Reason reason = Reason::entry_mismatch;
    Cx phase = Cx(1.0, 0.0);
    double max_residual = 0.0;
};

// Detailed comparison of two isometries modulo a global phase. The phase is
// fixed at the largest-modulus entry of `a` to avoid dividing by near-zeros.
IsoPhaseCompare iso_phase_compare(const Isometry& a, const Isometry& b, double tol = kPhaseTol);

// True iff same labels and parity and M_a = exp(i theta) M_b for some theta.
bool iso_equal_up_to_phase(const Isometry& a, const Isometry& b, double tol = kPhaseTol);

}  // namespace qswap
