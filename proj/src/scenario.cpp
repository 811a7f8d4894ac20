#include "qswap/scenario.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <set>

#include "qswap/rng.hpp"

namespace qswap {

namespace {

constexpr const char* kTeleportSet = "bsm_12";
constexpr const char* kVictorSet = "victor_23";
constexpr const char* kAbSet = "ab_14";
constexpr const char* kAliceSet = "alice_01";
constexpr const char* kAlice1Set = "alice1_02";
constexpr const char* kAlice2Set = "alice2_01";

Isometry oriented(const Isometry& iso, FactorLabel from, FactorLabel to, const char* what) {
    if (!iso.antilinear) throw ParityError(std::string(what) + ": source isometry must be antilinear");
    if (iso.from == from && iso.to == to) return iso;
    if (iso.from == to && iso.to == from) return invert(iso);
    throw LabelError(std::string(what) + ": isometry connects labels " + std::to_string(iso.from) +
                     "," + std::to_string(iso.to) + " but " + std::to_string(from) + "," +
                     std::to_string(to) + " are required");
}

void check_dim(const Isometry& iso, int d, const char* what) {
    if (iso.dim != d) throw ShapeError(std::string(what) + ": isometry dimension does not match d");
}

Ket checked_input(const Ket& input, FactorLabel label, int d) {
    if (input.factors().size() != 1 || input.factors()[0].label != label || input.factors()[0].dim != d)
        throw LabelError("input state must be a single factor on label " + std::to_string(label));
    if (!input.is_normalized(kScenarioTol)) throw ShapeError("input state must be normalized");
    return input;
}

}  // namespace

std::string to_string(ScenarioKind k) {
    switch (k) {
        case ScenarioKind::teleportation: return "teleportation";
        case ScenarioKind::swapping: return "swapping";
        case ScenarioKind::double_teleportation: return "double_teleportation";
        case ScenarioKind::triple_teleportation: return "triple_teleportation";
    }
    return "unknown";
}

std::vector<MeasurementSet> Scenario::sequence() const {
    std::vector<MeasurementSet> seq = forward_sequence;
    if (kind == ScenarioKind::swapping && !include_ab) {
        seq.erase(std::remove_if(seq.begin(), seq.end(),
                                 [](const MeasurementSet& s) { return s.name == kAbSet; }),
                  seq.end());
    }
    if (order == MeasurementOrder::reversed) {
        std::reverse(seq.begin(), seq.end());
        if (kind == ScenarioKind::triple_teleportation && !include_q02) {
            seq.erase(std::remove_if(seq.begin(), seq.end(),
                                     [](const MeasurementSet& s) { return s.name == kAlice1Set; }),
                      seq.end());
        }
    }
    return seq;
}

Scenario Scenario::flipped() const {
    Scenario out = *this;
    out.order = order == MeasurementOrder::forward ? MeasurementOrder::reversed : MeasurementOrder::forward;
    return out;
}

Ket Scenario::initial_state() const {
    std::optional<Ket> state = input;
    for (const auto& src : sources) {
        const Ket pair = state_from_isometry(src);
        state = state ? tensor(*state, pair) : pair;
    }
    if (!state) throw SimError("scenario has neither input nor sources");
    return *state;
}

Scenario build_teleportation(int d, const Ket& input, const Isometry& iso23,
                             const std::optional<Isometry>& bell_choice) {
    Scenario sc;
    sc.kind = ScenarioKind::teleportation;
    sc.d = d;
    sc.input = checked_input(input, 1, d);
    sc.input_label = 1;
    const Isometry src = oriented(iso23, 2, 3, "teleportation source");
    check_dim(src, d, "teleportation source");
    sc.sources.push_back(src);
    Isometry seed = bell_choice ? oriented(*bell_choice, 1, 2, "bell seed")
                                : Isometry::identity(1, 2, d);
    check_dim(seed, d, "bell seed");
    sc.forward_sequence.push_back(bell_set(kTeleportSet, seed));
    sc.bob_label = 3;
    sc.compare_labels = {3};
    return sc;
}

Scenario build_swapping(int d, const Isometry& iso12, const Isometry& iso34, MeasurementOrder order,
                        const Matrix& onb_alice, const Matrix& onb_bob, VictorChoice victor_choice,
                        const std::optional<Isometry>& victor_seed, bool include_ab) {
    Scenario sc;
    sc.kind = ScenarioKind::swapping;
    sc.d = d;
    sc.order = order;
    sc.victor_choice = victor_choice;
    sc.include_ab = include_ab;
    const Isometry s12 = oriented(iso12, 1, 2, "source (1,2)");
    const Isometry s34 = oriented(iso34, 3, 4, "source (3,4)");
    check_dim(s12, d, "source (1,2)");
    check_dim(s34, d, "source (3,4)");
    sc.sources = {s12, s34};
    if (victor_choice == VictorChoice::bell) {
        Isometry seed = victor_seed ? oriented(*victor_seed, 2, 3, "victor seed")
                                    : Isometry::identity(2, 3, d);
        check_dim(seed, d, "victor seed");
        sc.forward_sequence.push_back(bell_set(kVictorSet, seed));
    } else {
        sc.forward_sequence.push_back(separable_set(kVictorSet, 2, 3, d));
    }
    if (onb_alice.rows() != d || onb_bob.rows() != d)
        throw ShapeError("orientation bases must be d x d");
    sc.forward_sequence.push_back(product_set(kAbSet, 1, onb_alice, 4, onb_bob));
    sc.bob_label = 4;
    sc.compare_labels = {1, 4};
    return sc;
}

Scenario build_double_teleportation(int d, const Ket& input0, MeasurementOrder order,
                                    const Isometry& src12, const Isometry& src34,
                                    const std::optional<Isometry>& seed01,
                                    const std::optional<Isometry>& seed23) {
    Scenario sc;
    sc.kind = ScenarioKind::double_teleportation;
    sc.d = d;
    sc.order = order;
    sc.input = checked_input(input0, 0, d);
    sc.input_label = 0;
    const Isometry s12 = oriented(src12, 1, 2, "source (1,2)");
    const Isometry s34 = oriented(src34, 3, 4, "source (3,4)");
    check_dim(s12, d, "source (1,2)");
    check_dim(s34, d, "source (3,4)");
    sc.sources = {s12, s34};
    Isometry a01 = seed01 ? oriented(*seed01, 0, 1, "seed (0,1)") : Isometry::identity(0, 1, d);
    Isometry v23 = seed23 ? oriented(*seed23, 2, 3, "seed (2,3)") : Isometry::identity(2, 3, d);
    check_dim(a01, d, "seed (0,1)");
    check_dim(v23, d, "seed (2,3)");
    sc.forward_sequence.push_back(bell_set(kAliceSet, a01));
    sc.forward_sequence.push_back(bell_set(kVictorSet, v23));
    sc.bob_label = 4;
    sc.compare_labels = {4};
    return sc;
}

Scenario build_double_teleportation(int d, const Ket& input0, MeasurementOrder order) {
    return build_double_teleportation(d, input0, order, Isometry::identity(1, 2, d),
                                      Isometry::identity(3, 4, d));
}

Scenario build_triple_teleportation(int d, const Ket& input0, TripleVariant variant,
                                    MeasurementOrder order, bool include_q02,
                                    const std::optional<Matrix>& u0,
                                    const std::optional<Isometry>& src12,
                                    const std::optional<Isometry>& src34,
                                    const std::optional<Isometry>& seed01,
                                    const std::optional<Isometry>& seed23) {
    Scenario sc;
    sc.kind = ScenarioKind::triple_teleportation;
    sc.d = d;
    sc.order = order;
    sc.include_q02 = include_q02;
    sc.variant = variant;
    sc.input = checked_input(input0, 0, d);
    sc.input_label = 0;
    const Isometry s12 = src12 ? oriented(*src12, 1, 2, "source (1,2)") : Isometry::identity(1, 2, d);
    const Isometry s34 = src34 ? oriented(*src34, 3, 4, "source (3,4)") : Isometry::identity(3, 4, d);
    check_dim(s12, d, "source (1,2)");
    check_dim(s34, d, "source (3,4)");
    sc.sources = {s12, s34};

    Isometry seed02 = Isometry::identity(0, 2, d);
    switch (variant) {
        case TripleVariant::plain: break;
        case TripleVariant::shifted:
            seed02 = Isometry::shift(0, 2, d);
            break;
        case TripleVariant::unitary: {
            if (!u0) throw ShapeError("unitary variant requires u0");
            seed02 = conjugation_transport(seed02, *u0);
            break;
        }
    }
    Isometry a01 = seed01 ? oriented(*seed01, 0, 1, "seed (0,1)") : Isometry::identity(0, 1, d);
    Isometry v23 = seed23 ? oriented(*seed23, 2, 3, "seed (2,3)") : Isometry::identity(2, 3, d);
    check_dim(a01, d, "seed (0,1)");
    check_dim(v23, d, "seed (2,3)");
    sc.forward_sequence.push_back(bell_set(kAlice1Set, seed02));
    sc.forward_sequence.push_back(bell_set(kAlice2Set, a01));
    sc.forward_sequence.push_back(bell_set(kVictorSet, v23));
    sc.bob_label = 4;
    sc.compare_labels = {4};
    return sc;
}

namespace {

// Antilinear isometry of a maximally entangled measurement-set member, with
// the requested domain label.
Isometry member_iso(const MeasurementSet& set, int index, FactorLabel from) {
    return isometry_from_state(set.projectors[static_cast<size_t>(index)].full_ket(), from);
}

const MeasurementSet& find_set(const Scenario& sc, const std::string& name) {
    for (const auto& s : sc.forward_sequence)
        if (s.name == name) return s;
    throw LabelError("scenario has no measurement set named '" + name + "'");
}

const Isometry& find_source(const Scenario& sc, FactorLabel from, FactorLabel to) {
    for (const auto& s : sc.sources)
        if (s.from == from && s.to == to) return s;
    throw LabelError("scenario has no source on (" + std::to_string(from) + "," + std::to_string(to) + ")");
}

Ket two_factor_product(FactorLabel x, std::vector<Cx> u, FactorLabel y, std::vector<Cx> v) {
    return tensor(Ket::single(x, std::move(u)), Ket::single(y, std::move(v)));
}

std::vector<Cx> column(const Matrix& m, int j) {
    std::vector<Cx> v(m.rows());
    for (int i = 0; i < m.rows(); ++i) v[i] = m(i, j);
    return v;
}

Prediction predict_teleportation(const Scenario& sc) {
    Prediction out;
    out.compare_labels = sc.compare_labels;
    const MeasurementSet& bsm = find_set(sc, kTeleportSet);
    const Isometry& s23 = find_source(sc, 2, 3);
    const double prob = 1.0 / (static_cast<double>(sc.d) * sc.d);
    for (int i = 0; i < static_cast<int>(bsm.size()); ++i) {
        const Isometry chain = compose(s23, member_iso(bsm, i, 1));
        PredictedBranch b;
        b.key = outcome_key({{bsm.name, i}});
        b.prob = prob;
        b.local = Ket::single(sc.bob_label, chain(sc.input->amps()));
        b.transport = chain.m;  // chain is linear: two antilinear maps composed
        out.branches.push_back(std::move(b));
    }
    return out;
}

Prediction predict_swapping(const Scenario& sc) {
    Prediction out;
    out.compare_labels = sc.compare_labels;
    const MeasurementSet& victor = find_set(sc, kVictorSet);
    const Isometry& s12 = find_source(sc, 1, 2);
    const Isometry& s34 = find_source(sc, 3, 4);
    const double d = sc.d;
    const double victor_prob = 1.0 / (d * d);

    // Per Victor outcome: the (1,4) state right after his measurement.
    std::vector<Ket> pair_states;
    for (int i = 0; i < static_cast<int>(victor.size()); ++i) {
        if (sc.victor_choice == VictorChoice::bell) {
            const Isometry chain = compose(s34, compose(member_iso(victor, i, 2), s12));
            pair_states.push_back(state_from_isometry(chain));
        } else {
            // Separable projection |u>_2 |v>_3 transports through each pair:
            // factor 1 holds the inverse image of u, factor 4 the image of v.
            const auto& comps = victor.projectors[static_cast<size_t>(i)].components;
            const Ket& u = comps[0].has_label(2) ? comps[0] : comps[1];
            const Ket& v = comps[0].has_label(3) ? comps[0] : comps[1];
            pair_states.push_back(
                two_factor_product(1, invert(s12)(u.amps()), 4, s34(v.amps())));
        }
    }

    if (!sc.include_ab) {
        for (int i = 0; i < static_cast<int>(victor.size()); ++i) {
            PredictedBranch b;
            b.key = outcome_key({{victor.name, i}});
            b.prob = victor_prob;
            b.local = pair_states[static_cast<size_t>(i)];
            out.branches.push_back(std::move(b));
        }
        return out;
    }

    const MeasurementSet& ab = find_set(sc, kAbSet);
    for (int i = 0; i < static_cast<int>(victor.size()); ++i) {
        for (int j = 0; j < static_cast<int>(ab.size()); ++j) {
            const Ket ab_ket = ab.projectors[static_cast<size_t>(j)].full_ket();
            PredictedBranch b;
            b.key = outcome_key({{victor.name, i}, {ab.name, j}});
            b.prob = victor_prob * std::norm(inner(ab_ket, pair_states[static_cast<size_t>(i)]));
            b.local = ab_ket;
            out.branches.push_back(std::move(b));
        }
    }
    return out;
}

Prediction predict_double(const Scenario& sc) {
    Prediction out;
    out.compare_labels = sc.compare_labels;
    const MeasurementSet& alice = find_set(sc, kAliceSet);
    const MeasurementSet& victor = find_set(sc, kVictorSet);
    const Isometry& s12 = find_source(sc, 1, 2);
    const Isometry& s34 = find_source(sc, 3, 4);
    const double prob = 1.0 / std::pow(static_cast<double>(sc.d), 4);
    for (int i = 0; i < static_cast<int>(alice.size()); ++i) {
        const Isometry leg_02 = compose(s12, member_iso(alice, i, 0));
        for (int j = 0; j < static_cast<int>(victor.size()); ++j) {
            const Isometry leg_24 = compose(s34, member_iso(victor, j, 2));
            const Isometry chain = compose(leg_24, leg_02);
            PredictedBranch b;
            b.key = outcome_key({{alice.name, i}, {victor.name, j}});
            b.prob = prob;
            b.local = Ket::single(sc.bob_label, chain(sc.input->amps()));
            b.transport = chain.m;
            out.branches.push_back(std::move(b));
        }
    }
    return out;
}

Prediction predict_triple(const Scenario& sc) {
    Prediction out;
    out.compare_labels = sc.compare_labels;
    const MeasurementSet& alice1 = find_set(sc, kAlice1Set);
    const MeasurementSet& alice2 = find_set(sc, kAlice2Set);
    const MeasurementSet& victor = find_set(sc, kVictorSet);
    const Isometry& s12 = find_source(sc, 1, 2);
    const Isometry& s34 = find_source(sc, 3, 4);
    const int d2 = sc.d * sc.d;
    const bool forward = sc.order == MeasurementOrder::forward;
    const bool with_q02 = forward || sc.include_q02;
    const double prob = 1.0 / std::pow(static_cast<double>(d2), with_q02 ? 3 : 2);

    for (int i = 0; i < d2; ++i) {          // (0,1) member
        const Isometry j10 = member_iso(alice2, i, 0);
        for (int j = 0; j < d2; ++j) {      // (2,3) member
            const Isometry j32 = member_iso(victor, j, 2);
            const int q02_count = with_q02 ? d2 : 1;
            for (int k = 0; k < q02_count; ++k) {  // (0,2) member, when measured
                std::optional<Isometry> chain;
                if (forward) {
                    const Isometry j20 = member_iso(alice1, k, 0);
                    const Isometry leg_01 = compose(invert(s12), j20);
                    const Isometry leg_12 = compose(j20, invert(j10));
                    const Isometry leg_24 = compose(s34, j32);
                    chain = compose(leg_24, compose(leg_12, leg_01));
                } else {
                    // Swapping first: (1,4) carries the three-fold chain, then
                    // the (0,1) measurement teleports the input into it. The
                    // trailing (0,2) measurement does not touch Bob.
                    const Isometry swapped_14 = compose(s34, compose(j32, s12));
                    chain = compose(swapped_14, j10);
                }
                PredictedBranch b;
                std::vector<std::pair<std::string, int>> outcomes{{alice2.name, i}, {victor.name, j}};
                if (with_q02) outcomes.emplace_back(alice1.name, k);
                b.key = outcome_key(outcomes);
                b.prob = prob;
                b.local = Ket::single(sc.bob_label, (*chain)(sc.input->amps()));
                b.transport = chain->m;
                out.branches.push_back(std::move(b));
            }
        }
    }
    return out;
}

}  // namespace

Prediction predict(const Scenario& sc) {
    switch (sc.kind) {
        case ScenarioKind::teleportation: return predict_teleportation(sc);
        case ScenarioKind::swapping: return predict_swapping(sc);
        case ScenarioKind::double_teleportation: return predict_double(sc);
        case ScenarioKind::triple_teleportation: return predict_triple(sc);
    }
    throw SimError("unknown scenario kind");
}

namespace {

// All per-branch local states of one enumeration, keyed by the outcome key
// restricted to `shared` set names.
struct LocalBranches {
    std::map<OutcomeKey, double> probs;
    std::map<OutcomeKey, std::vector<Ket>> states;
};

OutcomeKey restrict_key(const OutcomeKey& key, const std::set<std::string>& shared) {
    OutcomeKey out;
    for (const auto& kv : key)
        if (shared.count(kv.first)) out.push_back(kv);
    return out;
}

LocalBranches collect_locals(const std::vector<HistoryRecord>& records,
                             const std::vector<FactorLabel>& compare_labels,
                             const std::set<std::string>& shared) {
    LocalBranches out;
    for (const auto& r : records) {
        const OutcomeKey key = restrict_key(outcome_key(r.outcomes), shared);
        out.probs[key] += r.joint_prob;
        if (!r.zero_branch && r.joint_prob > kZeroProb)
            out.states[key].push_back(extract_pure(r.final_state, compare_labels));
    }
    return out;
}

std::vector<SetPairDiag> set_pair_diagnostics(const std::vector<MeasurementSet>& seq, const Ket& initial) {
    std::vector<SetPairDiag> out;
    for (size_t a = 0; a < seq.size(); ++a) {
        for (size_t b = a + 1; b < seq.size(); ++b) {
            SetPairDiag diag;
            diag.set_a = seq[a].name;
            diag.set_b = seq[b].name;
            for (const auto& p : seq[a].projectors) {
                for (const auto& q : seq[b].projectors) {
                    const CommutesResult c = commutes(p, q);
                    diag.max_commutator = std::max(diag.max_commutator, c.norm);
                    diag.max_witness = std::max(
                        diag.max_witness, std::abs(order_independence_witness(initial, p, q)));
                }
            }
            diag.commuting = diag.max_commutator <= kOpTol;
            out.push_back(std::move(diag));
        }
    }
    return out;
}

}  // namespace

RunReport run_and_compare(const Scenario& sc, const std::optional<SamplingRequest>& sampling) {
    const auto t0 = std::chrono::steady_clock::now();
    RunReport report;
    report.kind = sc.kind;
    report.d = sc.d;
    report.order = sc.order;

    const std::vector<MeasurementSet> seq = sc.sequence();
    if (seq.empty()) {
        report.bob_defined = false;
        return report;
    }

    const Ket initial = sc.initial_state();
    const std::vector<HistoryRecord> records = run_history(initial, seq);
    const Prediction pred = predict(sc);

    std::map<OutcomeKey, const HistoryRecord*> oracle;
    for (const auto& r : records) oracle[outcome_key(r.outcomes)] = &r;

    std::optional<Ket> input_at_bob;
    if (sc.input) input_at_bob = sc.input->relabeled({{sc.input_label, sc.bob_label}});

    for (const auto& b : pred.branches) {
        auto it = oracle.find(b.key);
        if (it == oracle.end())
            throw SimError("prediction enumerates an outcome the oracle never produced");
        const HistoryRecord& rec = *it->second;
        OutcomeRow row;
        row.key = b.key;
        row.predicted_prob = b.prob;
        row.oracle_prob = rec.joint_prob;
        report.verdict.max_prob_delta =
            std::max(report.verdict.max_prob_delta, std::abs(b.prob - rec.joint_prob));
        const bool oracle_live = !rec.zero_branch && rec.joint_prob > kZeroProb;
        const bool pred_live = b.prob > kZeroProb;
        row.zero_branch = !oracle_live && !pred_live;
        if (oracle_live && pred_live && b.local) {
            const Ket oracle_local = extract_pure(rec.final_state, pred.compare_labels);
            row.fidelity = fidelity_up_to_phase(*b.local, oracle_local);
            report.verdict.min_fidelity = std::min(report.verdict.min_fidelity, row.fidelity);
            if (sc.apply_corrections && b.transport && input_at_bob) {
                const Ket bob = extract_pure(rec.final_state, {sc.bob_label});
                const Ket corrected = apply(b.transport->adjoint(), {sc.bob_label}, bob);
                row.corrected_fidelity = fidelity_up_to_phase(corrected, *input_at_bob);
            }
        }
        report.rows.push_back(std::move(row));
    }

    // Order dependence: replay the flipped chronological order and compare
    // probabilities and local states on the shared outcome keys.
    const Scenario flipped = sc.flipped();
    const std::vector<MeasurementSet> fseq = flipped.sequence();
    std::set<std::string> shared;
    for (const auto& s : seq)
        for (const auto& f : fseq)
            if (s.name == f.name) shared.insert(s.name);
    const std::vector<HistoryRecord> frecords = run_history(initial, fseq);
    const LocalBranches ours = collect_locals(records, pred.compare_labels, shared);
    const LocalBranches theirs = collect_locals(frecords, pred.compare_labels, shared);
    for (const auto& [key, p] : ours.probs) {
        const auto it = theirs.probs.find(key);
        const double q = it == theirs.probs.end() ? 0.0 : it->second;
        report.verdict.cross_order_max_prob_delta =
            std::max(report.verdict.cross_order_max_prob_delta, std::abs(p - q));
    }
    for (const auto& [key, states] : ours.states) {
        const auto it = theirs.states.find(key);
        if (it == theirs.states.end()) continue;
        for (const auto& s : states)
            for (const auto& t : it->second)
                report.verdict.cross_order_min_fidelity =
                    std::min(report.verdict.cross_order_min_fidelity, fidelity_up_to_phase(s, t));
    }
    report.verdict.order_dependent = report.verdict.cross_order_max_prob_delta > kOpTol ||
                                     report.verdict.cross_order_min_fidelity < 1.0 - kScenarioTol;
    report.verdict.set_pairs = set_pair_diagnostics(seq, initial);

    if (sampling && sampling->samples > 0) {
        SamplingSummary summary;
        summary.samples = sampling->samples;
        summary.seed = sampling->seed;
        report.seed = sampling->seed;
        Rng master(sampling->seed);
        std::map<OutcomeKey, std::uint64_t> counts;
        for (std::uint64_t n = 0; n < sampling->samples; ++n) {
            const HistoryRecord rec = sample_history(initial, seq, master.raw());
            counts[outcome_key(rec.outcomes)] += 1;
        }
        const double n = static_cast<double>(sampling->samples);
        for (auto& row : report.rows) {
            const auto it = counts.find(row.key);
            row.sample_freq = it == counts.end() ? 0.0 : static_cast<double>(it->second) / n;
            if (row.oracle_prob > kZeroProb) {
                const double expected = n * row.oracle_prob;
                const double observed = row.sample_freq * n;
                summary.chi_squared += (observed - expected) * (observed - expected) / expected;
                summary.degrees_of_freedom += 1;
            }
        }
        summary.degrees_of_freedom = std::max(0, summary.degrees_of_freedom - 1);
        report.sampling = summary;
    }

    report.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

}  // namespace qswap
