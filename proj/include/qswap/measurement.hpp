#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "qswap/projector.hpp"

namespace qswap {

// One outcome-sequence branch of a measurement history: the outcome index
// chosen in each set (chronological order), the joint probability, and the
// collapsed final state (a marked zero ket for impossible branches).
struct HistoryRecord {
    std::vector<std::pair<std::string, int>> outcomes;
    double joint_prob = 0.0;
    Ket final_state;
    bool zero_branch = false;
};

// Order-insensitive outcome key: (set name, index) pairs sorted by set name,
// so distributions from different chronological orders are comparable.
using OutcomeKey = std::vector<std::pair<std::string, int>>;
OutcomeKey outcome_key(const std::vector<std::pair<std::string, int>>& outcomes);

// Exhaustive enumeration of every outcome branch of the given measurement
// sequence in chronological order. Joint probabilities are the products of
// the conditional collapse probabilities; zero branches are kept, marked,
// and not refined further (their continuations all carry probability zero).
std::vector<HistoryRecord> run_history(const Ket& initial, const std::vector<MeasurementSet>& sequence);

// Probability table keyed by order-insensitive outcome key.
std::map<OutcomeKey, double> joint_distribution(const std::vector<HistoryRecord>& records);

struct CommutesResult {
    bool commuting;
    double norm;  // max-modulus entry of PQ - QP embedded on the union labels
};

// Embeds both projectors on the union of their label sets and measures the
// commutator; projectors on disjoint labels always commute.
CommutesResult commutes(const Projector& p, const Projector& q);

// Tr rho (Q P Q - P Q P) on the pure state rho = |initial><initial|; the
// first term is the probability of outcome pair (q then p), the second of
// (p then q). Zero for every state iff the outcome statistics of the pair
// are order-free.
double order_independence_witness(const Ket& initial, const Projector& p, const Projector& q);

// One branch sampled from the conditional distributions, reproducible per
// seed. Empirical frequencies over many seeds converge to the enumerated
// joint probabilities.
HistoryRecord sample_history(const Ket& initial, const std::vector<MeasurementSet>& sequence,
                             std::uint64_t seed);

}  // namespace qswap
