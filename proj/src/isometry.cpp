#include "qswap/isometry.hpp"

#include <cmath>
#include <string>

namespace qswap {

Isometry::Isometry(FactorLabel from, FactorLabel to, int dim, Matrix m, bool antilinear)
    : from(from), to(to), dim(dim), m(std::move(m)), antilinear(antilinear) {
    if (dim < 1) throw ShapeError("isometry dimension must be >= 1");
    if (this->m.rows() != dim || this->m.cols() != dim)
        throw ShapeError("isometry matrix must be " + std::to_string(dim) + "x" + std::to_string(dim));
    const double dev = this->m.unitary_deviation();
    if (dev > kOpTol)
        throw ShapeError("isometry matrix is not unitary (deviation " + std::to_string(dev) + ")");
}

Isometry Isometry::identity(FactorLabel from, FactorLabel to, int dim, bool antilinear) {
    return Isometry(from, to, dim, Matrix::identity(dim), antilinear);
}

Isometry Isometry::shift(FactorLabel from, FactorLabel to, int dim) {
    return Isometry(from, to, dim, weyl_x(dim), true);
}

std::vector<Cx> Isometry::operator()(const std::vector<Cx>& v) const {
    return antilinear ? m * vec_conj(v) : m * v;
}

Isometry compose(const Isometry& second, const Isometry& first) {
    if (first.to != second.from)
        throw LabelError("compose: first ends on label " + std::to_string(first.to) +
                         " but second starts on " + std::to_string(second.from));
    if (first.dim != second.dim) throw ShapeError("compose: dimension mismatch");
    Matrix m = second.antilinear ? second.m * first.m.conjugate() : second.m * first.m;
    return Isometry(first.from, second.to, first.dim, std::move(m),
                    second.antilinear != first.antilinear);
}

Isometry invert(const Isometry& iso) {
    // w = M conj(v) inverts to v = M^T conj(w); for the linear case the
    // unitary inverse is the adjoint.
    Matrix m = iso.antilinear ? iso.m.transpose() : iso.m.adjoint();
    return Isometry(iso.to, iso.from, iso.dim, std::move(m), iso.antilinear);
}

Ket state_from_isometry(const Isometry& iso) {
    if (!iso.antilinear)
        throw ParityError("only antilinear isometries correspond to pair states");
    if (iso.from == iso.to)
        throw LabelError("pair state needs two distinct labels");
    const int d = iso.dim;
    const double s = 1.0 / std::sqrt(static_cast<double>(d));
    const bool from_first = iso.from < iso.to;
    std::vector<Factor> fs = from_first ? std::vector<Factor>{{iso.from, d}, {iso.to, d}}
                                        : std::vector<Factor>{{iso.to, d}, {iso.from, d}};
    // amp(i at from, j at to) = M[j][i]/sqrt(d); storage is canonical by label.
    std::vector<Cx> amps(static_cast<size_t>(d) * d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            const size_t flat = from_first ? static_cast<size_t>(i) * d + j : static_cast<size_t>(j) * d + i;
            amps[flat] = iso.m(j, i) * s;
        }
    return Ket(std::move(fs), std::move(amps));
}

Ket state_from_isometry_in_basis(const Isometry& iso, const Matrix& onb) {
    if (!iso.antilinear) throw ParityError("only antilinear isometries correspond to pair states");
    if (onb.rows() != iso.dim || onb.cols() != iso.dim) throw ShapeError("basis has wrong dimension");
    if (onb.unitary_deviation() > kOpTol) throw ShapeError("basis columns are not orthonormal");
    const int d = iso.dim;
    const double s = 1.0 / std::sqrt(static_cast<double>(d));
    // Canonical (sorted) factor order, so the accumulation below matches the
    // layout of the tensor terms.
    std::vector<Factor> fs = iso.from < iso.to ? std::vector<Factor>{{iso.from, d}, {iso.to, d}}
                                               : std::vector<Factor>{{iso.to, d}, {iso.from, d}};
    std::vector<Cx> amps(static_cast<size_t>(d) * d);
    for (int k = 0; k < d; ++k) {
        std::vector<Cx> phi(d);
        for (int i = 0; i < d; ++i) phi[i] = onb(i, k);
        const std::vector<Cx> mapped = iso(phi);
        const Ket term = tensor(Ket::single(iso.from, phi), Ket::single(iso.to, mapped));
        for (size_t i = 0; i < amps.size(); ++i) amps[i] += s * term.amp(i);
    }
    return Ket(std::move(fs), std::move(amps));
}

Isometry isometry_from_state(const Ket& pair, FactorLabel from) {
    if (pair.factors().size() != 2) throw LabelError("pair state must have exactly two factors");
    if (!pair.has_label(from)) throw LabelError("requested domain label is not part of the state");
    const FactorLabel to = pair.factors()[0].label == from ? pair.factors()[1].label : pair.factors()[0].label;
    const int d = pair.dim_of(from);
    if (pair.dim_of(to) != d) throw ShapeError("pair factors must have equal dimensions");

    const Matrix rho = reduced_density(pair, {from});
    const double dev = max_abs_diff(rho, Matrix::identity(d).scaled(Cx(1.0 / d, 0.0)));
    if (dev > kScenarioTol)
        throw EntanglementError("state is not maximally entangled (reduced-state deviation " +
                                    std::to_string(dev) + ")",
                                dev);

    const double s = std::sqrt(static_cast<double>(d));
    const bool from_first = from < to;
    Matrix m(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            m(j, i) = s * (from_first ? pair.amp(static_cast<size_t>(i) * d + j)
                                      : pair.amp(static_cast<size_t>(j) * d + i));
    return Isometry(from, to, d, std::move(m), true);
}

Isometry isometry_from_state(const Ket& pair) {
    if (pair.factors().size() != 2) throw LabelError("pair state must have exactly two factors");
    return isometry_from_state(pair, pair.factors()[0].label);
}

Isometry conjugation_transport(const Isometry& iso, const Matrix& u) {
    if (!iso.antilinear) throw ParityError("conjugation transport is defined for antilinear isometries");
    if (u.rows() != iso.dim || u.cols() != iso.dim) throw ShapeError("unitary has wrong dimension");
    if (u.unitary_deviation() > kOpTol) throw ShapeError("conjugation transport requires a unitary");
    return Isometry(iso.from, iso.to, iso.dim, iso.m * u.conjugate(), true);
}

Matrix commuted_to_range(const Isometry& iso, const Matrix& u) {
    if (!iso.antilinear) throw ParityError("conjugation transport is defined for antilinear isometries");
    if (u.unitary_deviation() > kOpTol) throw ShapeError("conjugation transport requires a unitary");
    return iso.m * u.conjugate() * iso.m.adjoint();
}

IsoPhaseCompare iso_phase_compare(const Isometry& a, const Isometry& b, double tol) {
    IsoPhaseCompare out;
    if (a.from != b.from || a.to != b.to) {
        out.reason = IsoPhaseCompare::Reason::label_mismatch;
        return out;
    }
    if (a.antilinear != b.antilinear) {
        out.reason = IsoPhaseCompare::Reason::parity_mismatch;
        return out;
    }
    if (a.dim != b.dim) {
        out.reason = IsoPhaseCompare::Reason::dim_mismatch;
        return out;
    }
    const MatrixPhaseMatch m = equal_up_to_phase(a.m, b.m, tol);
    out.phase = m.phase;
    out.max_residual = m.max_residual;
    if (m.equal) {
        out.equal = true;
        out.reason = IsoPhaseCompare::Reason::match;
    } else {
        out.reason = m.support_mismatch ? IsoPhaseCompare::Reason::support_mismatch
                                        : IsoPhaseCompare::Reason::entry_mismatch;
    }
    return out;
}

bool iso_equal_up_to_phase(const Isometry& a, const Isometry& b, double tol) {
    return iso_phase_compare(a, b, tol).equal;
}

}  // namespace qswap
