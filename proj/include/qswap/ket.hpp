#pragma once

#include <map>
#include <vector>

#include "qswap/matrix.hpp"
#include "qswap/types.hpp"

namespace qswap {

struct Factor {
    FactorLabel label;
    int dim;
    friend bool operator==(const Factor&, const Factor&) = default;
};

// Pure state over an ordered set of labeled factors. Storage order is
// canonical by label, so formulas written against labels never depend on the
// order a state was assembled in. Amplitudes are row-major over the sorted
// factor list. Immutable after construction.
class Ket {
  public:
    // Factors may be given in any order; amplitudes are interpreted row-major
    // in the given order and re-sorted into canonical label order.
    Ket(std::vector<Factor> factors, std::vector<Cx> amps);

    static Ket basis(std::vector<Factor> factors, const std::vector<int>& indices);
    static Ket zero_like(const Ket& k);
    // Single-factor state from explicit amplitudes.
    static Ket single(FactorLabel label, std::vector<Cx> amps);

    const std::vector<Factor>& factors() const { return factors_; }
    std::vector<FactorLabel> labels() const;
    bool has_label(FactorLabel l) const;
    int dim_of(FactorLabel l) const;
    size_t size() const { return amps_.size(); }
    const std::vector<Cx>& amps() const { return amps_; }
    Cx amp(size_t flat) const { return amps_[flat]; }
    // Indices in canonical (sorted-label) factor order.
    Cx amp_at(const std::vector<int>& multi) const;

    double norm() const { return vec_norm(amps_); }
    bool is_zero() const { return norm() <= kZeroProb; }
    bool is_normalized(double tol = kStateTol) const;
    Ket normalized() const;
    Ket scaled(Cx s) const;
    Ket relabeled(const std::map<FactorLabel, FactorLabel>& mapping) const;

  private:
    std::vector<Factor> factors_;
    std::vector<Cx> amps_;
};

// Flat offsets of every multi-index over `sub` (row-major in the order given
// by `sub`) within the row-major layout of `all`. The single indexing
// primitive behind tensor/contract/apply/reduce.
std::vector<size_t> sub_offsets(const std::vector<Factor>& all, const std::vector<FactorLabel>& sub);

// Operator acting on an explicit list of factors. The matrix is row-major
// over the multi-index of `labels` in the order listed.
struct Operator {
    std::vector<FactorLabel> labels;
    Matrix m;
    bool unitary_hint = false;

    Operator(std::vector<FactorLabel> labels, Matrix m, bool unitary_hint = false);
};

// Tensor product; label sets must be disjoint.
Ket tensor(const Ket& a, const Ket& b);

// Full scalar product <bra|ket>; labels must coincide.
Cx inner(const Ket& bra, const Ket& ket);

// Contraction of conj(bra) against `state` over bra's labels, which must be
// a strict subset of the state's. The returned ket lives on the remaining
// labels and is generally unnormalized: a maximally entangled pair acts as a
// transporter sending <chi|_2 (|psi>_23) to the partner factor.
Ket partial_inner(const Ket& bra, const Ket& state);

Ket apply(const Operator& op, const Ket& state);
Ket apply(const Matrix& m, const std::vector<FactorLabel>& targets, const Ket& state);

// |<a|b>|^2 for same-label normalized states; 1 iff equal up to a global phase.
double fidelity_up_to_phase(const Ket& a, const Ket& b);

// Density matrix of `state` reduced to `subset` (row-major over the sorted
// subset labels).
Matrix reduced_density(const Ket& state, std::vector<FactorLabel> subset);

double purity(const Matrix& rho);

// Extracts the pure state on `subset` when the reduction there is pure
// within tol; throws EntanglementError with the purity deficit otherwise.
// The global phase of the result is arbitrary.
Ket extract_pure(const Ket& state, std::vector<FactorLabel> subset, double tol = kScenarioTol);

}  // namespace qswap
