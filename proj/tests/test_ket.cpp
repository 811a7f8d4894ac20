#include <cmath>
#include <map>

#include "doctest.h"
#include "qswap/ket.hpp"
#include "qswap/projector.hpp"
#include "qswap/rng.hpp"

using namespace qswap;

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

Ket bell_phi_plus(FactorLabel a, FactorLabel b) {
    return Ket({{a, 2}, {b, 2}}, {Cx(kInvSqrt2, 0), Cx(0, 0), Cx(0, 0), Cx(kInvSqrt2, 0)});
}

Ket bell_psi_minus(FactorLabel a, FactorLabel b) {
    return Ket({{a, 2}, {b, 2}}, {Cx(0, 0), Cx(kInvSqrt2, 0), Cx(-kInvSqrt2, 0), Cx(0, 0)});
}

Ket random_ket(Rng& rng, std::vector<Factor> factors) {
    size_t n = 1;
    for (const auto& f : factors) n *= static_cast<size_t>(f.dim);
    std::vector<Cx> amps(n);
    for (auto& x : amps) x = rng.gaussian_cx();
    Ket k(std::move(factors), std::move(amps));
    return k.normalized();
}

// Independent contraction oracle on an explicit multi-index map, sharing no
// index arithmetic with the library.
std::map<std::vector<int>, Cx> to_map(const Ket& k) {
    std::map<std::vector<int>, Cx> out;
    const auto& fs = k.factors();
    std::vector<int> idx(fs.size(), 0);
    for (size_t flat = 0; flat < k.size(); ++flat) {
        out[idx] = k.amp(flat);
        for (size_t j = fs.size(); j-- > 0;) {
            if (++idx[j] < fs[j].dim) break;
            idx[j] = 0;
        }
    }
    return out;
}

}  // namespace

TEST_SUITE("ket") {

TEST_CASE("tensor of basis kets puts the single amplitude at the joint index") {
    const Ket up = Ket::basis({{0, 2}}, {0});
    const Ket down = Ket::basis({{1, 2}}, {1});
    const Ket prod = tensor(up, down);
    CHECK(prod.amp_at({0, 1}) == Cx(1.0, 0.0));
    CHECK(prod.norm() == doctest::Approx(1.0));
    int nonzero = 0;
    for (size_t i = 0; i < prod.size(); ++i)
        if (std::abs(prod.amp(i)) > 0) ++nonzero;
    CHECK(nonzero == 1);
}

TEST_CASE("tensor multiplies norms") {
    Rng rng(42);
    for (int trial = 0; trial < 10; ++trial) {
        Ket a = random_ket(rng, {{0, 2}, {2, 2}});
        Ket b = random_ket(rng, {{1, 3}});
        a = a.scaled(Cx(0.7, 0.1));
        CHECK(tensor(a, b).norm() == doctest::Approx(a.norm() * b.norm()).epsilon(1e-12));
    }
}

TEST_CASE("tensor expansion of input times entangled pair, amplitudes frozen by hand") {
    const double alpha = 0.6, beta = 0.8;
    const Ket phi = Ket::single(0, {Cx(alpha, 0), Cx(beta, 0)});
    const Ket pair = bell_phi_plus(2, 3);
    const Ket total = tensor(phi, pair);
    const std::vector<Cx> expected = {Cx(alpha * kInvSqrt2, 0), Cx(0, 0), Cx(0, 0), Cx(alpha * kInvSqrt2, 0),
                                      Cx(beta * kInvSqrt2, 0),  Cx(0, 0), Cx(0, 0), Cx(beta * kInvSqrt2, 0)};
    REQUIRE(total.size() == expected.size());
    for (size_t i = 0; i < expected.size(); ++i)
        CHECK(std::abs(total.amp(i) - expected[i]) < 1e-15);
}

TEST_CASE("tensor rejects label collisions") {
    const Ket a = Ket::basis({{0, 2}}, {0});
    const Ket b = Ket::basis({{0, 2}}, {1});
    CHECK_THROWS_AS(tensor(a, b), LabelError);
}

TEST_CASE("canonical label order is independent of construction order") {
    Rng rng(7);
    std::vector<Cx> amps(8);
    for (auto& x : amps) x = rng.gaussian_cx();
    // (2,0,1) given order vs canonical (0,1,2): amp[(i2,i0,i1)] == canonical[(i0,i1,i2)]
    const Ket scrambled({{2, 2}, {0, 2}, {1, 2}}, amps);
    for (int i2 = 0; i2 < 2; ++i2)
        for (int i0 = 0; i0 < 2; ++i0)
            for (int i1 = 0; i1 < 2; ++i1)
                CHECK(scrambled.amp_at({i0, i1, i2}) == amps[static_cast<size_t>(i2 * 4 + i0 * 2 + i1)]);
}

TEST_CASE("partial_inner reduces a factor against a product") {
    Rng rng(3);
    const Ket chi = random_ket(rng, {{2, 2}});
    const Ket phi = random_ket(rng, {{2, 2}});
    const Ket kappa = random_ket(rng, {{3, 2}});
    const Ket result = partial_inner(chi, tensor(phi, kappa));
    const Cx overlap = inner(chi, phi);
    REQUIRE(result.labels() == std::vector<FactorLabel>{3});
    for (size_t i = 0; i < result.size(); ++i)
        CHECK(std::abs(result.amp(i) - overlap * kappa.amp(i)) < 1e-12);
}

TEST_CASE("partial_inner of <up| against the singlet leaves |down>/sqrt(2)") {
    const Ket up = Ket::basis({{2, 2}}, {0});
    const Ket res = partial_inner(up, bell_psi_minus(2, 3));
    CHECK(std::abs(res.amp(0)) < 1e-15);
    CHECK(std::abs(res.amp(1) - Cx(kInvSqrt2, 0)) < 1e-15);
}

TEST_CASE("partial_inner agrees with a brute-force index-summation oracle") {
    Rng rng(11);
    for (int trial = 0; trial < 5; ++trial) {
        const Ket bra = random_ket(rng, {{1, 3}, {4, 3}});
        const Ket state = random_ket(rng, {{1, 3}, {2, 3}, {4, 3}});
        const Ket got = partial_inner(bra, state);

        const auto bra_map = to_map(bra);      // indices (i1, i4)
        const auto state_map = to_map(state);  // indices (i1, i2, i4)
        for (int i2 = 0; i2 < 3; ++i2) {
            Cx want{};
            for (int i1 = 0; i1 < 3; ++i1)
                for (int i4 = 0; i4 < 3; ++i4)
                    want += std::conj(bra_map.at({i1, i4})) * state_map.at({i1, i2, i4});
            CHECK(std::abs(got.amp(static_cast<size_t>(i2)) - want) < 1e-12);
        }
    }
}

TEST_CASE("partial_inner label errors") {
    Rng rng(5);
    const Ket state = random_ket(rng, {{0, 2}, {1, 2}});
    CHECK_THROWS_AS(partial_inner(random_ket(rng, {{7, 2}}), state), LabelError);
    CHECK_THROWS_AS(partial_inner(random_ket(rng, {{0, 2}, {1, 2}}), state), FullContractionError);
}

TEST_CASE("apply: identity leaves the state, X flips one factor only") {
    Rng rng(9);
    const Ket state = random_ket(rng, {{0, 2}, {1, 2}, {2, 2}});
    const Ket same = apply(Matrix::identity(8), {0, 1, 2}, state);
    for (size_t i = 0; i < state.size(); ++i) CHECK(std::abs(same.amp(i) - state.amp(i)) < 1e-15);

    const Ket flipped = apply(weyl_x(2), {1}, state);
    for (int i0 = 0; i0 < 2; ++i0)
        for (int i1 = 0; i1 < 2; ++i1)
            for (int i2 = 0; i2 < 2; ++i2)
                CHECK(std::abs(flipped.amp_at({i0, i1, i2}) - state.amp_at({i0, 1 - i1, i2})) < 1e-15);
}

TEST_CASE("apply preserves the norm for unitary operators and respects target order") {
    Rng rng(13);
    const Ket state = random_ket(rng, {{0, 2}, {3, 2}});
    const Matrix u = rng.haar_unitary(4);
    const Ket out = apply(Operator({3, 0}, u, true), state);
    CHECK(out.norm() == doctest::Approx(1.0).epsilon(1e-12));
    // Matrix rows are indexed (i3, i0) because the targets were given as (3, 0).
    const auto oracle = [&](int i0, int i3) {
        Cx s{};
        for (int j3 = 0; j3 < 2; ++j3)
            for (int j0 = 0; j0 < 2; ++j0) s += u(i3 * 2 + i0, j3 * 2 + j0) * state.amp_at({j0, j3});
        return s;
    };
    for (int i0 = 0; i0 < 2; ++i0)
        for (int i3 = 0; i3 < 2; ++i3) CHECK(std::abs(out.amp_at({i0, i3}) - oracle(i0, i3)) < 1e-12);
}

TEST_CASE("apply rejects mismatched dimensions") {
    const Ket state = Ket::basis({{0, 2}, {1, 2}}, {0, 0});
    CHECK_THROWS_AS(apply(Matrix::identity(3), {0}, state), ShapeError);
}

TEST_CASE("projecting a Bell state onto itself is certain and idempotent") {
    const Ket bell = bell_phi_plus(2, 3);
    const auto r = project(Projector::rank1(bell), bell);
    CHECK(r.prob == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(fidelity_up_to_phase(r.state, bell) == doctest::Approx(1.0).epsilon(1e-12));
    const auto again = project(Projector::rank1(bell), r.state);
    CHECK(again.prob == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(fidelity_up_to_phase(again.state, r.state) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("Bell projection on (1,2) teleports with probability 1/4") {
    Rng rng(21);
    const Ket phi = random_ket(rng, {{1, 2}});
    const Ket total = tensor(phi, bell_phi_plus(2, 3));
    const auto r = project(Projector::rank1(bell_phi_plus(1, 2)), total);
    CHECK(r.prob == doctest::Approx(0.25).epsilon(1e-12));
    const Ket bob = extract_pure(r.state, {3});
    const Ket expected = phi.relabeled({{1, 3}});
    CHECK(fidelity_up_to_phase(bob, expected) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("projecting onto an orthogonal basis ket gives the zero branch") {
    const Ket state = Ket::basis({{0, 2}, {1, 2}}, {0, 0});
    const auto r = project(Projector::rank1(Ket::basis({{0, 2}, {1, 2}}, {1, 1})), state);
    CHECK(r.prob == 0.0);
    CHECK(r.impossible);
    CHECK(r.state.is_zero());
}

TEST_CASE("fidelity is phase blind and vanishes on orthogonal states") {
    Rng rng(33);
    const Ket a = random_ket(rng, {{0, 3}});
    const Ket rotated = a.scaled(Cx(std::cos(1.1), std::sin(1.1)));
    CHECK(fidelity_up_to_phase(a, rotated) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(fidelity_up_to_phase(Ket::basis({{0, 2}}, {0}), Ket::basis({{0, 2}}, {1})) ==
          doctest::Approx(0.0));
    const Ket plus = Ket::single(0, {Cx(kInvSqrt2, 0), Cx(kInvSqrt2, 0)});
    const Ket minus = Ket::single(0, {Cx(kInvSqrt2, 0), Cx(-kInvSqrt2, 0)});
    CHECK(fidelity_up_to_phase(plus, minus) == doctest::Approx(0.0));
    CHECK_THROWS_AS(fidelity_up_to_phase(plus, Ket::basis({{1, 2}}, {0})), LabelError);
}

TEST_CASE("property: collapse renormalizes and a complete family is exhaustive") {
    Rng rng(55);
    for (int d : {2, 3}) {
        const Ket state = random_ket(rng, {{0, d}, {1, d}, {2, d}});
        const MeasurementSet set = bell_set("pair", Isometry::identity(0, 1, d));
        double total = 0.0;
        for (const auto& p : set.projectors) {
            const auto r = project(p, state);
            total += r.prob;
            if (!r.impossible) CHECK(r.state.norm() == doctest::Approx(1.0).epsilon(1e-12));
        }
        CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("property: iterated contraction equals one contraction over the union") {
    Rng rng(77);
    for (int d : {2, 3}) {
        for (int trial = 0; trial < 5; ++trial) {
            const Ket s = random_ket(rng, {{0, d}, {1, d}});
            const Ket t = random_ket(rng, {{2, d}});
            const Ket state = random_ket(rng, {{0, d}, {1, d}, {2, d}, {3, d}});
            const Ket two_step = partial_inner(t, partial_inner(s, state));
            const Ket one_step = partial_inner(tensor(s, t), state);
            REQUIRE(two_step.labels() == one_step.labels());
            for (size_t i = 0; i < one_step.size(); ++i)
                CHECK(std::abs(two_step.amp(i) - one_step.amp(i)) < 1e-12);
        }
    }
}

TEST_CASE("reduced density and pure extraction") {
    Rng rng(99);
    const Ket phi = random_ket(rng, {{2, 3}});
    const Ket psi = random_ket(rng, {{0, 3}, {1, 3}});
    const Ket state = tensor(phi, psi);
    const Matrix rho = reduced_density(state, {2});
    CHECK(std::abs(rho.trace() - Cx(1.0, 0.0)) < 1e-12);
    CHECK(purity(rho) == doctest::Approx(1.0).epsilon(1e-12));
    const Ket back = extract_pure(state, {2});
    CHECK(fidelity_up_to_phase(back, phi) == doctest::Approx(1.0).epsilon(1e-9));
    // The (0,1) part of a maximally entangled pair with 2 is not pure.
    const Ket pair = state_from_isometry(Isometry::identity(0, 1, 3));
    CHECK_THROWS_AS(extract_pure(tensor(pair, phi), {0}), EntanglementError);
}

}  // TEST_SUITE
