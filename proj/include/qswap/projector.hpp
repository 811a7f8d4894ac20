#pragma once

#include <string>
#include <vector>

#include "qswap/isometry.hpp"
#include "qswap/ket.hpp"

namespace qswap {

// Rank-1 projection operator on a named subset of factors, stored as the
// list of normalized component kets it projects onto. A single component is
// a plain rank-1 projector; several components with disjoint labels form a
// product projector.
struct Projector {
    std::vector<Ket> components;

    static Projector rank1(Ket v);
    static Projector product(std::vector<Ket> vs);

    std::vector<Factor> factor_list() const;
    std::vector<FactorLabel> labels() const;
    // The full projection ket (tensor product of the components).
    Ket full_ket() const;
};

struct ProjectionResult {
    Ket state;    // collapsed and renormalized; zero ket when impossible
    double prob;  // |P state|^2
    bool impossible;
};

// P|state> without renormalization; the workhorse for probabilities,
// commutators and trace conditions.
Ket apply_projector(const Projector& p, const Ket& state);

// Outcome probability and collapsed state. Zero-probability outcomes come
// back as a marked zero branch, not as an error, so history enumeration can
// record them.
ProjectionResult project(const Projector& p, const Ket& state);

// Complete orthogonal family of projectors on a fixed label set.
struct MeasurementSet {
    std::string name;
    std::vector<Projector> projectors;

    MeasurementSet(std::string name, std::vector<Projector> projectors);

    const std::vector<FactorLabel>& labels() const { return labels_; }
    size_t size() const { return projectors.size(); }

    // Orthogonality and completeness; throws CompletenessError. Called by the
    // constructor and again by run_history before any enumeration.
    void validate() const;

  private:
    std::vector<FactorLabel> labels_;
};

// The d^2 projectors onto (W_ab x 1)|seed>, W_ab = X^a Z^b applied to the
// lower of the two labels; member index is a*d+b. Together with any
// maximally entangled seed this is a complete orthogonal family of
// maximally entangled states.
MeasurementSet bell_set(const std::string& name, const Isometry& seed);

// Product measurement |u_i> x |v_j| on two factors; the orthonormal bases
// are the columns of onb_x / onb_y, member index is i*d_y + j.
MeasurementSet product_set(const std::string& name, FactorLabel x, const Matrix& onb_x, FactorLabel y,
                           const Matrix& onb_y);

// Computational product basis on a pair, diagonal members first:
// (0,0),(1,1),...,(d-1,d-1) then the off-diagonal pairs row-major.
MeasurementSet separable_set(const std::string& name, FactorLabel x, FactorLabel y, int d);

}  // namespace qswap
