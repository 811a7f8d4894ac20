#include "qswap/measurement.hpp"

#include <algorithm>
#include <cmath>

#include "qswap/rng.hpp"

namespace qswap {

namespace {

void check_sequence(const Ket& initial, const std::vector<MeasurementSet>& sequence) {
    if (!initial.is_normalized(kScenarioTol))
        throw ShapeError("run_history: initial state is not normalized");
    for (size_t i = 0; i < sequence.size(); ++i) {
        sequence[i].validate();
        for (const auto& f : sequence[i].projectors.front().factor_list()) {
            if (!initial.has_label(f.label) || initial.dim_of(f.label) != f.dim)
                throw LabelError("run_history: set '" + sequence[i].name +
                                 "' measures labels outside the state");
        }
        for (size_t j = i + 1; j < sequence.size(); ++j)
            if (sequence[i].name == sequence[j].name)
                throw LabelError("run_history: duplicate set name '" + sequence[i].name + "'");
    }
}

}  // namespace

OutcomeKey outcome_key(const std::vector<std::pair<std::string, int>>& outcomes) {
    OutcomeKey key = outcomes;
    std::sort(key.begin(), key.end());
    return key;
}

std::vector<HistoryRecord> run_history(const Ket& initial, const std::vector<MeasurementSet>& sequence) {
    check_sequence(initial, sequence);
    std::vector<HistoryRecord> frontier{HistoryRecord{{}, 1.0, initial, false}};
    for (const auto& set : sequence) {
        std::vector<HistoryRecord> next;
        next.reserve(frontier.size() * set.size());
        for (const auto& branch : frontier) {
            for (int i = 0; i < static_cast<int>(set.size()); ++i) {
                HistoryRecord rec = branch;
                rec.outcomes.emplace_back(set.name, i);
                if (branch.zero_branch) {
                    rec.joint_prob = 0.0;
                } else {
                    const ProjectionResult r = project(set.projectors[i], branch.final_state);
                    rec.joint_prob = branch.joint_prob * r.prob;
                    rec.final_state = r.state;
                    rec.zero_branch = r.impossible;
                }
                next.push_back(std::move(rec));
            }
        }
        frontier = std::move(next);
    }
    return frontier;
}

std::map<OutcomeKey, double> joint_distribution(const std::vector<HistoryRecord>& records) {
    std::map<OutcomeKey, double> table;
    for (const auto& r : records) table[outcome_key(r.outcomes)] += r.joint_prob;
    return table;
}

namespace {

std::vector<Factor> union_factors(const Projector& p, const Projector& q) {
    std::vector<Factor> fs = p.factor_list();
    for (const auto& f : q.factor_list()) {
        bool found = false;
        for (const auto& g : fs) {
            if (g.label == f.label) {
                if (g.dim != f.dim)
                    throw ShapeError("projectors disagree on the dimension of label " +
                                     std::to_string(f.label));
                found = true;
            }
        }
        if (!found) fs.push_back(f);
    }
    std::sort(fs.begin(), fs.end(), [](const Factor& a, const Factor& b) { return a.label < b.label; });
    return fs;
}

// Full matrix of the projector on the given factor list, built column by
// column from its action on basis kets.
Matrix embed(const Projector& p, const std::vector<Factor>& fs) {
    size_t dim = 1;
    for (const auto& f : fs) dim *= static_cast<size_t>(f.dim);
    Matrix m(static_cast<int>(dim), static_cast<int>(dim));
    std::vector<int> idx(fs.size(), 0);
    for (size_t col = 0; col < dim; ++col) {
        const Ket column = apply_projector(p, Ket::basis(fs, idx));
        for (size_t row = 0; row < dim; ++row) m(static_cast<int>(row), static_cast<int>(col)) = column.amp(row);
        for (size_t j = fs.size(); j-- > 0;) {
            if (++idx[j] < fs[j].dim) break;
            idx[j] = 0;
        }
    }
    return m;
}

}  // namespace

CommutesResult commutes(const Projector& p, const Projector& q) {
    const auto fs = union_factors(p, q);
    const Matrix pm = embed(p, fs);
    const Matrix qm = embed(q, fs);
    const double norm = max_abs_diff(pm * qm, qm * pm);
    return {norm <= kOpTol, norm};
}

double order_independence_witness(const Ket& initial, const Projector& p, const Projector& q) {
    const Ket qpq = apply_projector(q, apply_projector(p, apply_projector(q, initial)));
    const Ket pqp = apply_projector(p, apply_projector(q, apply_projector(p, initial)));
    return (inner(initial, qpq) - inner(initial, pqp)).real();
}

HistoryRecord sample_history(const Ket& initial, const std::vector<MeasurementSet>& sequence,
                             std::uint64_t seed) {
    check_sequence(initial, sequence);
    Rng rng(seed);
    HistoryRecord rec{{}, 1.0, initial, false};
    for (const auto& set : sequence) {
        std::vector<ProjectionResult> results;
        results.reserve(set.size());
        std::vector<double> cumulative;
        double acc = 0.0;
        for (const auto& proj : set.projectors) {
            results.push_back(project(proj, rec.final_state));
            acc += results.back().prob;
            cumulative.push_back(acc);
        }
        // acc is 1 within tolerance by completeness; draw in [0, acc) so the
        // residual rounding never selects past the end.
        const double u = rng.uniform() * acc;
        size_t pick = 0;
        while (pick + 1 < cumulative.size() && u >= cumulative[pick]) ++pick;
        rec.outcomes.emplace_back(set.name, static_cast<int>(pick));
        rec.joint_prob *= results[pick].prob;
        rec.final_state = results[pick].state;
        rec.zero_branch = results[pick].impossible;
        if (rec.zero_branch) break;
    }
    return rec;
}

}  // namespace qswap
