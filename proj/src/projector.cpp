#include "qswap/projector.hpp"

#include <algorithm>
#include <cmath>

namespace qswap {

Projector Projector::rank1(Ket v) {
    if (!v.is_normalized())
        throw ShapeError("projector component must be normalized");
    Projector p;
    p.components.push_back(std::move(v));
    return p;
}

Projector Projector::product(std::vector<Ket> vs) {
    if (vs.empty()) throw ShapeError("product projector needs at least one component");
    Projector p;
    for (auto& v : vs) {
        if (!v.is_normalized()) throw ShapeError("projector component must be normalized");
        for (const auto& f : v.factors())
            for (const auto& q : p.components)
                if (q.has_label(f.label))
                    throw LabelError("product projector components overlap on label " +
                                     std::to_string(f.label));
        p.components.push_back(std::move(v));
    }
    return p;
}

std::vector<Factor> Projector::factor_list() const {
    std::vector<Factor> fs;
    for (const auto& c : components)
        for (const auto& f : c.factors()) fs.push_back(f);
    std::sort(fs.begin(), fs.end(), [](const Factor& a, const Factor& b) { return a.label < b.label; });
    return fs;
}

std::vector<FactorLabel> Projector::labels() const {
    std::vector<FactorLabel> ls;
    for (const auto& f : factor_list()) ls.push_back(f.label);
    return ls;
}

Ket Projector::full_ket() const {
    Ket out = components.front();
    for (size_t i = 1; i < components.size(); ++i) out = tensor(out, components[i]);
    return out;
}

Ket apply_projector(const Projector& p, const Ket& state) {
    // P|state> = |v> (x) <v|state>, component by component; components live on
    // disjoint labels so the order does not matter.
    Ket cur = state;
    for (const auto& v : p.components) {
        if (v.factors().size() == cur.factors().size()) {
            // Projector covers everything that is left.
            const Cx c = [&] {
                if (v.factors() != cur.factors())
                    throw LabelError("projector labels do not match the state");
                return inner(v, cur);
            }();
            cur = v.scaled(c);
        } else {
            cur = tensor(v, partial_inner(v, cur));
        }
    }
    return cur;
}

ProjectionResult project(const Projector& p, const Ket& state) {
    const Ket projected = apply_projector(p, state);
    const double n = projected.norm();
    const double prob = n * n;
    if (prob < kZeroProb) return {Ket::zero_like(state), 0.0, true};
    return {projected.scaled(Cx(1.0 / n, 0.0)), prob, false};
}

MeasurementSet::MeasurementSet(std::string name, std::vector<Projector> projectors)
    : name(std::move(name)), projectors(std::move(projectors)) {
    if (this->projectors.empty()) throw CompletenessError("measurement set has no projectors");
    labels_ = this->projectors.front().labels();
    validate();
}

void MeasurementSet::validate() const {
    size_t dim = 1;
    for (const auto& f : projectors.front().factor_list()) dim *= static_cast<size_t>(f.dim);
    for (const auto& p : projectors) {
        if (p.labels() != labels_)
            throw CompletenessError("set '" + name + "': projectors cover different label sets");
    }
    // Rank-1 projectors are orthogonal iff their kets are, and dim orthonormal
    // kets resolve the identity, so completeness reduces to counting.
    if (projectors.size() != dim)
        throw CompletenessError("set '" + name + "': " + std::to_string(projectors.size()) +
                                " projectors cannot resolve an identity of dimension " + std::to_string(dim));
    std::vector<Ket> kets;
    kets.reserve(projectors.size());
    for (const auto& p : projectors) kets.push_back(p.full_ket());
    for (size_t i = 0; i < kets.size(); ++i) {
        if (std::abs(kets[i].norm() - 1.0) > kOpTol)
            throw CompletenessError("set '" + name + "': projector " + std::to_string(i) +
                                    " is not normalized");
        for (size_t j = i + 1; j < kets.size(); ++j) {
            if (std::abs(inner(kets[i], kets[j])) > kOpTol)
                throw CompletenessError("set '" + name + "': projectors " + std::to_string(i) + " and " +
                                        std::to_string(j) + " are not orthogonal");
        }
    }
}

MeasurementSet bell_set(const std::string& name, const Isometry& seed) {
    const Ket seed_state = state_from_isometry(seed);
    const FactorLabel low = std::min(seed.from, seed.to);
    const int d = seed.dim;
    std::vector<Projector> ps;
    ps.reserve(static_cast<size_t>(d) * d);
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b)
            ps.push_back(Projector::rank1(apply(weyl(d, a, b), {low}, seed_state)));
    return MeasurementSet(name, std::move(ps));
}

MeasurementSet product_set(const std::string& name, FactorLabel x, const Matrix& onb_x, FactorLabel y,
                           const Matrix& onb_y) {
    if (onb_x.unitary_deviation() > kOpTol || onb_y.unitary_deviation() > kOpTol)
        throw ShapeError("product_set: basis columns must be orthonormal");
    std::vector<Projector> ps;
    for (int i = 0; i < onb_x.cols(); ++i)
        for (int j = 0; j < onb_y.cols(); ++j) {
            std::vector<Cx> u(onb_x.rows()), v(onb_y.rows());
            for (int r = 0; r < onb_x.rows(); ++r) u[r] = onb_x(r, i);
            for (int r = 0; r < onb_y.rows(); ++r) v[r] = onb_y(r, j);
            ps.push_back(Projector::product({Ket::single(x, std::move(u)), Ket::single(y, std::move(v))}));
        }
    return MeasurementSet(name, std::move(ps));
}

MeasurementSet separable_set(const std::string& name, FactorLabel x, FactorLabel y, int d) {
    std::vector<Projector> ps;
    auto add = [&](int i, int j) {
        std::vector<Cx> u(d), v(d);
        u[i] = Cx(1.0, 0.0);
        v[j] = Cx(1.0, 0.0);
        ps.push_back(Projector::product({Ket::single(x, std::move(u)), Ket::single(y, std::move(v))}));
    };
    for (int i = 0; i < d; ++i) add(i, i);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            if (i != j) add(i, j);
    return MeasurementSet(name, std::move(ps));
}

}  // namespace qswap
