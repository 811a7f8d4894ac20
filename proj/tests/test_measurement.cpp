#include <cmath>

#include "doctest.h"
#include "qswap/measurement.hpp"
#include "qswap/rng.hpp"

using namespace qswap;

namespace {

// 0.999 quantiles of the chi-squared distribution (significance 1e-3).
constexpr double kChi2Crit1 = 10.827566170662733;
constexpr double kChi2Crit3 = 16.26623619623813;

Ket random_ket(Rng& rng, std::vector<Factor> factors) {
    size_t n = 1;
    for (const auto& f : factors) n *= static_cast<size_t>(f.dim);
    std::vector<Cx> amps(n);
    for (auto& x : amps) x = rng.gaussian_cx();
    return Ket(std::move(factors), std::move(amps)).normalized();
}

// Teleportation configuration: input on 1, maximally entangled (2,3).
Ket teleport_state(Rng& rng) {
    return tensor(random_ket(rng, {{1, 2}}), state_from_isometry(Isometry::identity(2, 3, 2)));
}

// Independent embedding oracle: the full matrix of |v><v| acting on labels
// (0,2) inside (0,1,2), built with explicit six-index loops.
Matrix embed_02_in_012(const Ket& v, int d) {
    const int D = d * d * d;
    Matrix out(D, D);
    for (int i0 = 0; i0 < d; ++i0)
        for (int i1 = 0; i1 < d; ++i1)
            for (int i2 = 0; i2 < d; ++i2)
                for (int j0 = 0; j0 < d; ++j0)
                    for (int j1 = 0; j1 < d; ++j1)
                        for (int j2 = 0; j2 < d; ++j2) {
                            if (i1 != j1) continue;
                            const int row = (i0 * d + i1) * d + i2;
                            const int col = (j0 * d + j1) * d + j2;
                            out(row, col) = v.amp_at({i0, i2}) * std::conj(v.amp_at({j0, j2}));
                        }
    return out;
}

Matrix embed_01_in_012(const Ket& v, int d) {
    const int D = d * d * d;
    Matrix out(D, D);
    for (int i0 = 0; i0 < d; ++i0)
        for (int i1 = 0; i1 < d; ++i1)
            for (int i2 = 0; i2 < d; ++i2)
                for (int j0 = 0; j0 < d; ++j0)
                    for (int j1 = 0; j1 < d; ++j1)
                        for (int j2 = 0; j2 < d; ++j2) {
                            if (i2 != j2) continue;
                            const int row = (i0 * d + i1) * d + i2;
                            const int col = (j0 * d + j1) * d + j2;
                            out(row, col) = v.amp_at({i0, i1}) * std::conj(v.amp_at({j0, j1}));
                        }
    return out;
}

}  // namespace

TEST_SUITE("measurement") {

TEST_CASE("a Bell measurement on the teleport state has four branches of 1/4") {
    Rng rng(101);
    const Ket initial = teleport_state(rng);
    const auto records = run_history(initial, {bell_set("bsm_12", Isometry::identity(1, 2, 2))});
    REQUIRE(records.size() == 4);
    double total = 0.0;
    for (const auto& r : records) {
        CHECK(r.joint_prob == doctest::Approx(0.25).epsilon(1e-12));
        total += r.joint_prob;
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("measuring a basis state in its own basis is deterministic") {
    const Ket state = Ket::basis({{0, 2}, {1, 2}}, {1, 0});
    const auto records = run_history(state, {separable_set("z", 0, 1, 2)});
    int live = 0;
    for (const auto& r : records) {
        if (r.joint_prob > 0.5) {
            ++live;
            CHECK(r.joint_prob == doctest::Approx(1.0).epsilon(1e-12));
            CHECK_FALSE(r.zero_branch);
        } else {
            CHECK(r.joint_prob == 0.0);
            CHECK(r.zero_branch);
        }
    }
    CHECK(live == 1);
}

TEST_CASE("a three-set qubit sequence enumerates 64 branches that sum to one") {
    Rng rng(103);
    const Ket initial = tensor(tensor(random_ket(rng, {{0, 2}}),
                                      state_from_isometry(Isometry::identity(1, 2, 2))),
                               state_from_isometry(Isometry::identity(3, 4, 2)));
    const std::vector<MeasurementSet> seq = {bell_set("alice1_02", Isometry::identity(0, 2, 2)),
                                             bell_set("alice2_01", Isometry::identity(0, 1, 2)),
                                             bell_set("victor_23", Isometry::identity(2, 3, 2))};
    const auto records = run_history(initial, seq);
    REQUIRE(records.size() == 64);
    double total = 0.0;
    for (const auto& r : records) total += r.joint_prob;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("an incomplete projector family is rejected on construction") {
    std::vector<Projector> ps;
    ps.push_back(Projector::rank1(Ket::basis({{0, 2}}, {0})));
    CHECK_THROWS_AS(MeasurementSet("broken", ps), CompletenessError);
    // Non-orthogonal family of the right size is rejected too.
    const double s = 1.0 / std::sqrt(2.0);
    std::vector<Projector> qs;
    qs.push_back(Projector::rank1(Ket::basis({{0, 2}}, {0})));
    qs.push_back(Projector::rank1(Ket::single(0, {Cx(s, 0), Cx(s, 0)})));
    CHECK_THROWS_AS(MeasurementSet("skew", qs), CompletenessError);
}

TEST_CASE("joint distributions of commuting sets agree for both orders") {
    Rng rng(107);
    const Ket initial = tensor(state_from_isometry(Isometry(1, 2, 2, rng.haar_unitary(2), true)),
                               state_from_isometry(Isometry(3, 4, 2, rng.haar_unitary(2), true)));
    const MeasurementSet victor = bell_set("victor_23", Isometry::identity(2, 3, 2));
    const MeasurementSet ab = product_set("ab_14", 1, rng.haar_unitary(2), 4, rng.haar_unitary(2));
    const auto forward = joint_distribution(run_history(initial, {victor, ab}));
    const auto reversed = joint_distribution(run_history(initial, {ab, victor}));
    REQUIRE(forward.size() == reversed.size());
    for (const auto& [key, p] : forward) CHECK(std::abs(p - reversed.at(key)) < 1e-10);

    const auto one = joint_distribution(run_history(initial, {victor}));
    double total = 0.0;
    for (const auto& [key, p] : one) {
        CHECK(p == doctest::Approx(0.25).epsilon(1e-10));
        total += p;
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("overlapping-set probabilities may match even when the final states differ") {
    Rng rng(109);
    const Ket initial = tensor(tensor(random_ket(rng, {{0, 3}}),
                                      state_from_isometry(Isometry::identity(1, 2, 3))),
                               state_from_isometry(Isometry::identity(3, 4, 3)));
    const std::vector<MeasurementSet> fwd = {bell_set("alice1_02", Isometry::shift(0, 2, 3)),
                                             bell_set("alice2_01", Isometry::identity(0, 1, 3)),
                                             bell_set("victor_23", Isometry::identity(2, 3, 3))};
    std::vector<MeasurementSet> rev = {fwd[2], fwd[1], fwd[0]};
    const auto rf = run_history(initial, fwd);
    const auto rr = run_history(initial, rev);
    const auto df = joint_distribution(rf);
    const auto dr = joint_distribution(rr);
    for (const auto& [key, p] : df) CHECK(std::abs(p - dr.at(key)) < 1e-10);

    std::map<OutcomeKey, const HistoryRecord*> by_key;
    for (const auto& r : rr) by_key[outcome_key(r.outcomes)] = &r;
    double min_fid = 1.0;
    for (const auto& r : rf) {
        if (r.zero_branch) continue;
        const Ket a = extract_pure(r.final_state, {4});
        const Ket b = extract_pure(by_key.at(outcome_key(r.outcomes))->final_state, {4});
        min_fid = std::min(min_fid, fidelity_up_to_phase(a, b));
    }
    CHECK(min_fid < 0.99);
}

TEST_CASE("commutes: disjoint labels always commute, a projector commutes with itself") {
    const Projector p = Projector::product(
        {Ket::basis({{1, 2}}, {0}), Ket::basis({{4, 2}}, {1})});
    const Projector q = Projector::rank1(state_from_isometry(Isometry::identity(2, 3, 2)));
    const auto disjoint = commutes(p, q);
    CHECK(disjoint.commuting);
    CHECK(disjoint.norm < 1e-15);
    const auto self = commutes(q, q);
    CHECK(self.commuting);
    CHECK(self.norm < 1e-12);
}

TEST_CASE("commutes matches an explicit embedding oracle on overlapping Bell projectors") {
    const int d = 2;
    const Ket v02 = state_from_isometry(Isometry::identity(0, 2, d));
    const Ket v01 = state_from_isometry(Isometry::identity(0, 1, d));
    const auto got = commutes(Projector::rank1(v02), Projector::rank1(v01));
    const Matrix p = embed_02_in_012(v02, d);
    const Matrix q = embed_01_in_012(v01, d);
    const double want = max_abs_diff(p * q, q * p);
    CHECK(got.norm == doctest::Approx(want).epsilon(1e-12));
    CHECK_FALSE(got.commuting);
    CHECK(got.norm > 0.1);
}

TEST_CASE("order witness vanishes for disjoint supports and identical projectors") {
    Rng rng(113);
    const Ket initial = random_ket(rng, {{0, 2}, {1, 2}, {2, 2}, {3, 2}});
    const Projector p = Projector::rank1(random_ket(rng, {{0, 2}, {1, 2}}));
    const Projector q = Projector::rank1(random_ket(rng, {{2, 2}, {3, 2}}));
    CHECK(std::abs(order_independence_witness(initial, p, q)) < 1e-12);
    CHECK(std::abs(order_independence_witness(initial, p, p)) < 1e-12);
}

TEST_CASE("order witness is sound: zero witness comes with equal pair probabilities") {
    // Maximally entangled members on the overlapping (0,2)/(0,1) channels,
    // evaluated on the product initial state: the pairwise statistics are
    // order-free (witness 0) even though the projectors do not commute; the
    // order dependence lives in the collapsed states, not these traces.
    Rng rng(127);
    const Ket initial = tensor(tensor(random_ket(rng, {{0, 2}}),
                                      state_from_isometry(Isometry::identity(1, 2, 2))),
                               state_from_isometry(Isometry::identity(3, 4, 2)));
    const MeasurementSet a02 = bell_set("a02", Isometry::identity(0, 2, 2));
    const MeasurementSet a01 = bell_set("a01", Isometry::identity(0, 1, 2));
    for (const auto& p : a02.projectors) {
        for (const auto& q : a01.projectors) {
            CHECK_FALSE(commutes(p, q).commuting);
            CHECK(std::abs(order_independence_witness(initial, q, p)) < 1e-12);
            // Direct check of the matching pair probabilities.
            const Ket qp = apply_projector(q, apply_projector(p, initial));
            const Ket pq = apply_projector(p, apply_projector(q, initial));
            CHECK(std::abs(qp.norm() * qp.norm() - pq.norm() * pq.norm()) < 1e-12);
        }
    }
    // On the state collapsed by the first measurement the same pair is order
    // sensitive, and the witness sees it.
    const Ket collapsed = project(a02.projectors[0], initial).state;
    double max_witness = 0.0;
    for (const auto& q : a01.projectors)
        max_witness = std::max(max_witness,
                               std::abs(order_independence_witness(collapsed, a02.projectors[0], q)));
    CHECK(max_witness > 0.01);
}

TEST_CASE("sampling is reproducible and respects deterministic branches") {
    const Ket state = Ket::basis({{0, 2}, {1, 2}}, {1, 0});
    const std::vector<MeasurementSet> seq = {separable_set("z", 0, 1, 2)};
    for (std::uint64_t seed : {1ULL, 99ULL, 123456789ULL}) {
        const HistoryRecord rec = sample_history(state, seq, seed);
        CHECK(rec.outcomes.size() == 1);
        CHECK(rec.joint_prob == doctest::Approx(1.0).epsilon(1e-12));
    }
    Rng rng(131);
    const Ket initial = teleport_state(rng);
    const std::vector<MeasurementSet> bsm = {bell_set("bsm_12", Isometry::identity(1, 2, 2))};
    const HistoryRecord a = sample_history(initial, bsm, 777);
    const HistoryRecord b = sample_history(initial, bsm, 777);
    CHECK(a.outcomes == b.outcomes);
    CHECK(a.joint_prob == b.joint_prob);
    for (size_t i = 0; i < a.final_state.size(); ++i)
        CHECK(a.final_state.amp(i) == b.final_state.amp(i));
}

TEST_CASE("Bell sampling frequencies are uniform within 0.01 and pass the chi-squared test") {
    Rng rng(137);
    const Ket initial = teleport_state(rng);
    const std::vector<MeasurementSet> seq = {bell_set("bsm_12", Isometry::identity(1, 2, 2))};
    const int n = 100000;
    std::vector<int> counts(4, 0);
    Rng seeder(2024);
    for (int i = 0; i < n; ++i) {
        const HistoryRecord rec = sample_history(initial, seq, seeder.raw());
        counts[static_cast<size_t>(rec.outcomes[0].second)] += 1;
    }
    double chi2 = 0.0;
    for (int c : counts) {
        CHECK(std::abs(c / static_cast<double>(n) - 0.25) < 0.01);
        const double expected = n * 0.25;
        chi2 += (c - expected) * (c - expected) / expected;
    }
    CHECK(chi2 < kChi2Crit3);
}

TEST_CASE("sampling follows a non-uniform enumerated distribution") {
    const Ket state = Ket::single(0, {Cx(0.6, 0), Cx(0.8, 0)});
    const MeasurementSet z("z", {Projector::rank1(Ket::basis({{0, 2}}, {0})),
                                 Projector::rank1(Ket::basis({{0, 2}}, {1}))});
    const int n = 100000;
    int c0 = 0;
    Rng seeder(4077);
    for (int i = 0; i < n; ++i)
        if (sample_history(state, {z}, seeder.raw()).outcomes[0].second == 0) ++c0;
    const double e0 = n * 0.36, e1 = n * 0.64;
    const double chi2 = (c0 - e0) * (c0 - e0) / e0 + ((n - c0) - e1) * ((n - c0) - e1) / e1;
    CHECK(chi2 < kChi2Crit1);
}

TEST_CASE("property: every enumeration conserves probability") {
    Rng rng(139);
    for (int d : {2, 3}) {
        const Ket initial = random_ket(rng, {{0, d}, {1, d}, {2, d}});
        const std::vector<MeasurementSet> seq = {
            bell_set("p01", Isometry(0, 1, d, rng.haar_unitary(d), true)),
            bell_set("p12", Isometry(1, 2, d, rng.haar_unitary(d), true))};
        const auto records = run_history(initial, seq);
        double total = 0.0;
        for (const auto& r : records) total += r.joint_prob;
        CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("property: pairwise commuting sets give order-free tables and states") {
    Rng rng(149);
    const Ket initial = random_ket(rng, {{0, 2}, {1, 2}, {2, 2}, {3, 2}});
    const MeasurementSet s01 = bell_set("s01", Isometry(0, 1, 2, rng.haar_unitary(2), true));
    const MeasurementSet s23 = bell_set("s23", Isometry(2, 3, 2, rng.haar_unitary(2), true));
    for (const auto& p : s01.projectors)
        for (const auto& q : s23.projectors) CHECK(commutes(p, q).commuting);
    const auto fwd = run_history(initial, {s01, s23});
    const auto rev = run_history(initial, {s23, s01});
    const auto df = joint_distribution(fwd);
    const auto dr = joint_distribution(rev);
    for (const auto& [key, prob] : df) CHECK(std::abs(prob - dr.at(key)) < 1e-10);
    std::map<OutcomeKey, const HistoryRecord*> by_key;
    for (const auto& r : rev) by_key[outcome_key(r.outcomes)] = &r;
    for (const auto& r : fwd) {
        if (r.zero_branch) continue;
        const HistoryRecord& other = *by_key.at(outcome_key(r.outcomes));
        CHECK(fidelity_up_to_phase(r.final_state, other.final_state) ==
              doctest::Approx(1.0).epsilon(1e-9));
    }
}

}  // TEST_SUITE
