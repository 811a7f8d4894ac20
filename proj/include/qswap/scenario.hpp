#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qswap/measurement.hpp"

namespace qswap {

enum class ScenarioKind { teleportation, swapping, double_teleportation, triple_teleportation };
enum class MeasurementOrder { forward, reversed };
enum class TripleVariant { plain, shifted, unitary };
enum class VictorChoice { bell, separable };

std::string to_string(ScenarioKind k);

// One experimental set-up: an optional input state, the entangled pair
// sources, and the chronological measurement sequence. The forward sequence
// is stored in full; the active sequence is derived from `order` (and, for
// the triple set-up, from include_q02, whose final measurement does not
// influence the teleported state and is optional in the reversed order).
//
// Label conventions: teleportation uses input 1, source (2,3), output 3;
// the four- and five-factor set-ups use sources (1,2), (3,4) with input 0
// and output 4. Source isometries run from the lower to the upper label of
// their pair. Every source matrix is unitary by construction, which is
// exactly the maximal-entanglement requirement on the pair states.
struct Scenario {
    ScenarioKind kind;
    int d = 2;
    MeasurementOrder order = MeasurementOrder::forward;

    std::optional<Ket> input;
    FactorLabel input_label = -1;
    std::vector<Isometry> sources;
    std::vector<MeasurementSet> forward_sequence;
    FactorLabel bob_label = -1;
    // Labels the per-outcome predictions live on ({bob} or the swapped pair).
    std::vector<FactorLabel> compare_labels;

    bool apply_corrections = false;
    bool include_q02 = true;
    bool include_ab = true;
    VictorChoice victor_choice = VictorChoice::bell;
    TripleVariant variant = TripleVariant::plain;

    // Active chronological sequence for the configured order.
    std::vector<MeasurementSet> sequence() const;
    // Same set-up with the opposite chronological order.
    Scenario flipped() const;
    // Tensor product of input and source pair states.
    Ket initial_state() const;
};

// Single teleportation: input on 1, entangled source on (2,3), Bell
// measurement on (1,2) generated from bell_choice (default: the identity
// isometry), output read at 3.
Scenario build_teleportation(int d, const Ket& input, const Isometry& iso23,
                             const std::optional<Isometry>& bell_choice = std::nullopt);

// Entanglement swapping on (1,2) x (3,4). forward: Victor's (2,3)
// measurement first, then the product measurement on (1,4); reversed is the
// delayed-choice variant with Alice and Bob measuring first. Victor either
// measures the maximally entangled family (bell) or the computational
// product basis (separable); include_ab=false drops the (1,4) measurement,
// leaving the bare swapping step.
Scenario build_swapping(int d, const Isometry& iso12, const Isometry& iso34, MeasurementOrder order,
                        const Matrix& onb_alice, const Matrix& onb_bob,
                        VictorChoice victor_choice = VictorChoice::bell,
                        const std::optional<Isometry>& victor_seed = std::nullopt, bool include_ab = true);

// Double teleportation 0 -> 2 -> 4: measurements on (0,1) and (2,3).
// forward: Alice first; reversed: Victor first (swapping first). Both orders
// hand Bob the same state because the projectors live on disjoint factors.
Scenario build_double_teleportation(int d, const Ket& input0, MeasurementOrder order,
                                    const Isometry& src12, const Isometry& src34,
                                    const std::optional<Isometry>& seed01 = std::nullopt,
                                    const std::optional<Isometry>& seed23 = std::nullopt);
Scenario build_double_teleportation(int d, const Ket& input0, MeasurementOrder order);

// Triple teleportation 0 -> 1 -> 2 -> 4 with measurements on (0,2), (0,1)
// and (2,3); the (0,2) and (0,1) projectors overlap on factor 0 and do not
// commute. The variant controls the (0,2) seed: plain (identity), shifted
// (cyclic shift; detects the ordering for d > 2), or unitary (identity
// composed with u0 on the domain).
Scenario build_triple_teleportation(int d, const Ket& input0, TripleVariant variant,
                                    MeasurementOrder order, bool include_q02 = true,
                                    const std::optional<Matrix>& u0 = std::nullopt,
                                    const std::optional<Isometry>& src12 = std::nullopt,
                                    const std::optional<Isometry>& src34 = std::nullopt,
                                    const std::optional<Isometry>& seed01 = std::nullopt,
                                    const std::optional<Isometry>& seed23 = std::nullopt);

// Per-outcome analytic prediction obtained purely by composing isometries
// (no state-vector contraction): the expected state on compare_labels, its
// probability, and, for set-ups with an input, the composed linear transport
// whose adjoint is Bob's correction.
struct PredictedBranch {
    OutcomeKey key;
    double prob = 0.0;
    std::optional<Ket> local;
    std::optional<Matrix> transport;
};

struct Prediction {
    std::vector<FactorLabel> compare_labels;
    std::vector<PredictedBranch> branches;
};

Prediction predict(const Scenario& sc);

// Calculus-versus-oracle comparison report.
struct OutcomeRow {
    OutcomeKey key;
    double predicted_prob = 0.0;
    double oracle_prob = 0.0;
    double fidelity = -1.0;            // predicted vs oracle local state; -1 on zero branches
    double corrected_fidelity = -1.0;  // corrected Bob state vs input; -1 when n/a
    bool zero_branch = false;
    double sample_freq = -1.0;  // empirical frequency when sampling; -1 when off
};

struct SetPairDiag {
    std::string set_a;
    std::string set_b;
    double max_commutator = 0.0;  // max entry norm of [P,Q] over member pairs
    bool commuting = true;
    double max_witness = 0.0;  // max |Tr rho (QPQ - PQP)| over member pairs
};

struct Verdict {
    bool order_dependent = false;
    double max_prob_delta = 0.0;  // predicted vs oracle, worst row
    double min_fidelity = 1.0;    // predicted vs oracle, worst row
    double cross_order_max_prob_delta = 0.0;
    double cross_order_min_fidelity = 1.0;
    std::vector<SetPairDiag> set_pairs;
};

struct SamplingSummary {
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;
    double chi_squared = 0.0;
    int degrees_of_freedom = 0;
};

struct RunReport {
    ScenarioKind kind = ScenarioKind::teleportation;
    int d = 2;
    MeasurementOrder order = MeasurementOrder::forward;
    bool bob_defined = true;  // false for an empty measurement sequence
    std::vector<OutcomeRow> rows;
    Verdict verdict;
    std::optional<SamplingSummary> sampling;
    std::uint64_t seed = 0;
    double runtime_ms = 0.0;
};

struct SamplingRequest {
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;
};

// Runs the state-vector oracle and the isometry calculus over every outcome
// branch, compares probabilities and local states, and determines order
// dependence by replaying the flipped sequence and matching branches on the
// shared outcome keys.
RunReport run_and_compare(const Scenario& sc,
                          const std::optional<SamplingRequest>& sampling = std::nullopt);

}  // namespace qswap
