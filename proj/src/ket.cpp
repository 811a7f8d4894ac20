#include "qswap/ket.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qswap {

namespace {

size_t product_dim(const std::vector<Factor>& fs) {
    size_t n = 1;
    for (const auto& f : fs) n *= static_cast<size_t>(f.dim);
    return n;
}

std::vector<FactorLabel> labels_of(const std::vector<Factor>& fs) {
    std::vector<FactorLabel> out;
    out.reserve(fs.size());
    for (const auto& f : fs) out.push_back(f.label);
    return out;
}

}  // namespace

Ket::Ket(std::vector<Factor> factors, std::vector<Cx> amps) {
    for (const auto& f : factors) {
        if (f.dim < 2) throw ShapeError("factor dimension must be >= 2");
    }
    for (size_t i = 0; i < factors.size(); ++i)
        for (size_t j = i + 1; j < factors.size(); ++j)
            if (factors[i].label == factors[j].label)
                throw LabelError("duplicate factor label " + std::to_string(factors[i].label));
    if (amps.size() != product_dim(factors))
        throw ShapeError("amplitude count does not match the factor dimensions");

    const bool sorted = std::is_sorted(factors.begin(), factors.end(),
                                       [](const Factor& a, const Factor& b) { return a.label < b.label; });
    if (sorted || factors.empty()) {
        factors_ = std::move(factors);
        amps_ = std::move(amps);
        return;
    }
    factors_ = factors;
    std::sort(factors_.begin(), factors_.end(),
              [](const Factor& a, const Factor& b) { return a.label < b.label; });
    // Re-index the amplitudes from the given order into canonical order.
    const auto offs = sub_offsets(factors_, labels_of(factors));
    amps_.assign(amps.size(), Cx{});
    for (size_t i = 0; i < amps.size(); ++i) amps_[offs[i]] = amps[i];
}

Ket Ket::basis(std::vector<Factor> factors, const std::vector<int>& indices) {
    if (indices.size() != factors.size()) throw ShapeError("basis: one index per factor required");
    size_t flat = 0;
    for (size_t i = 0; i < factors.size(); ++i) {
        if (indices[i] < 0 || indices[i] >= factors[i].dim) throw ShapeError("basis: index out of range");
        flat = flat * static_cast<size_t>(factors[i].dim) + static_cast<size_t>(indices[i]);
    }
    std::vector<Cx> amps(product_dim(factors));
    amps[flat] = Cx(1.0, 0.0);
    return Ket(std::move(factors), std::move(amps));
}

Ket Ket::zero_like(const Ket& k) {
    return Ket(k.factors_, std::vector<Cx>(k.amps_.size()));
}

Ket Ket::single(FactorLabel label, std::vector<Cx> amps) {
    const int dim = static_cast<int>(amps.size());
    return Ket({Factor{label, dim}}, std::move(amps));
}

std::vector<FactorLabel> Ket::labels() const { return labels_of(factors_); }

bool Ket::has_label(FactorLabel l) const {
    for (const auto& f : factors_)
        if (f.label == l) return true;
    return false;
}

int Ket::dim_of(FactorLabel l) const {
    for (const auto& f : factors_)
        if (f.label == l) return f.dim;
    throw LabelError("no factor with label " + std::to_string(l));
}

Cx Ket::amp_at(const std::vector<int>& multi) const {
    if (multi.size() != factors_.size()) throw ShapeError("amp_at: one index per factor required");
    size_t flat = 0;
    for (size_t i = 0; i < factors_.size(); ++i)
        flat = flat * static_cast<size_t>(factors_[i].dim) + static_cast<size_t>(multi[i]);
    return amps_[flat];
}

bool Ket::is_normalized(double tol) const { return std::abs(norm() - 1.0) <= tol; }

Ket Ket::normalized() const {
    const double n = norm();
    if (n <= kZeroProb) throw SimError("cannot normalize a zero state");
    return scaled(Cx(1.0 / n, 0.0));
}

Ket Ket::scaled(Cx s) const {
    Ket out = *this;
    for (auto& x : out.amps_) x *= s;
    return out;
}

Ket Ket::relabeled(const std::map<FactorLabel, FactorLabel>& mapping) const {
    std::vector<Factor> fs = factors_;
    for (auto& f : fs) {
        auto it = mapping.find(f.label);
        if (it != mapping.end()) f.label = it->second;
    }
    return Ket(std::move(fs), amps_);
}

std::vector<size_t> sub_offsets(const std::vector<Factor>& all, const std::vector<FactorLabel>& sub) {
    // Row-major strides of the full layout.
    std::vector<size_t> stride(all.size());
    size_t s = 1;
    for (size_t i = all.size(); i-- > 0;) {
        stride[i] = s;
        s *= static_cast<size_t>(all[i].dim);
    }
    std::vector<size_t> sub_stride(sub.size());
    std::vector<int> sub_dim(sub.size());
    size_t count = 1;
    for (size_t j = 0; j < sub.size(); ++j) {
        bool found = false;
        for (size_t i = 0; i < all.size(); ++i) {
            if (all[i].label == sub[j]) {
                sub_stride[j] = stride[i];
                sub_dim[j] = all[i].dim;
                found = true;
                break;
            }
        }
        if (!found) throw LabelError("label " + std::to_string(sub[j]) + " not present in the state");
        count *= static_cast<size_t>(sub_dim[j]);
    }
    std::vector<size_t> offs(count);
    std::vector<int> idx(sub.size(), 0);
    size_t off = 0;
    for (size_t n = 0;; ++n) {
        offs[n] = off;
        size_t j = sub.size();
        while (j-- > 0) {
            off += sub_stride[j];
            if (++idx[j] < sub_dim[j]) break;
            off -= static_cast<size_t>(sub_dim[j]) * sub_stride[j];
            idx[j] = 0;
        }
        if (n + 1 == count) break;
    }
    return offs;
}

Operator::Operator(std::vector<FactorLabel> labels, Matrix m, bool unitary_hint)
    : labels(std::move(labels)), m(std::move(m)), unitary_hint(unitary_hint) {
    if (this->m.rows() != this->m.cols()) throw ShapeError("operator matrix must be square");
    if (unitary_hint && this->m.unitary_deviation() > kOpTol)
        throw ShapeError("operator marked unitary fails the unitarity check");
}

namespace {

std::vector<Factor> complement_of(const std::vector<Factor>& all, const std::vector<FactorLabel>& sub) {
    std::vector<Factor> rest;
    for (const auto& f : all) {
        if (std::find(sub.begin(), sub.end(), f.label) == sub.end()) rest.push_back(f);
    }
    return rest;
}

}  // namespace

Ket tensor(const Ket& a, const Ket& b) {
    std::vector<Factor> fs = a.factors();
    for (const auto& f : b.factors()) {
        if (a.has_label(f.label))
            throw LabelError("tensor: factor label " + std::to_string(f.label) + " present on both sides");
        fs.push_back(f);
    }
    std::sort(fs.begin(), fs.end(), [](const Factor& x, const Factor& y) { return x.label < y.label; });
    const auto offs_a = sub_offsets(fs, a.labels());
    const auto offs_b = sub_offsets(fs, b.labels());
    std::vector<Cx> amps(offs_a.size() * offs_b.size());
    for (size_t i = 0; i < offs_a.size(); ++i) {
        const Cx ai = a.amp(i);
        if (ai == Cx{}) continue;
        for (size_t j = 0; j < offs_b.size(); ++j) amps[offs_a[i] + offs_b[j]] = ai * b.amp(j);
    }
    return Ket(std::move(fs), std::move(amps));
}

Cx inner(const Ket& bra, const Ket& ket) {
    if (bra.factors() != ket.factors()) throw LabelError("inner: states live on different factors");
    return vec_inner(bra.amps(), ket.amps());
}

Ket partial_inner(const Ket& bra, const Ket& state) {
    for (const auto& f : bra.factors()) {
        if (!state.has_label(f.label))
            throw LabelError("partial_inner: bra label " + std::to_string(f.label) + " not in state");
        if (state.dim_of(f.label) != f.dim)
            throw ShapeError("partial_inner: dimension mismatch on label " + std::to_string(f.label));
    }
    if (bra.factors().size() == state.factors().size())
        throw FullContractionError("partial_inner over all labels; use inner() instead");
    const auto rest = complement_of(state.factors(), bra.labels());
    const auto offs_bra = sub_offsets(state.factors(), bra.labels());
    const auto offs_rest = sub_offsets(state.factors(), labels_of(rest));
    std::vector<Cx> amps(offs_rest.size());
    for (size_t r = 0; r < offs_rest.size(); ++r) {
        Cx s{};
        for (size_t b = 0; b < offs_bra.size(); ++b)
            s += std::conj(bra.amp(b)) * state.amp(offs_bra[b] + offs_rest[r]);
        amps[r] = s;
    }
    return Ket(rest, std::move(amps));
}

Ket apply(const Operator& op, const Ket& state) { return apply(op.m, op.labels, state); }

Ket apply(const Matrix& m, const std::vector<FactorLabel>& targets, const Ket& state) {
    size_t tdim = 1;
    for (const auto& l : targets) tdim *= static_cast<size_t>(state.dim_of(l));
    if (m.rows() != m.cols() || static_cast<size_t>(m.rows()) != tdim)
        throw ShapeError("apply: matrix dimension does not match the target factors");
    const auto rest = complement_of(state.factors(), targets);
    const auto offs_t = sub_offsets(state.factors(), targets);
    const auto offs_rest = sub_offsets(state.factors(), labels_of(rest));
    std::vector<Cx> amps(state.size());
    std::vector<Cx> x(tdim);
    for (size_t r = 0; r < offs_rest.size(); ++r) {
        for (size_t t = 0; t < tdim; ++t) x[t] = state.amp(offs_t[t] + offs_rest[r]);
        for (size_t i = 0; i < tdim; ++i) {
            Cx s{};
            for (size_t j = 0; j < tdim; ++j) s += m(static_cast<int>(i), static_cast<int>(j)) * x[j];
            amps[offs_t[i] + offs_rest[r]] = s;
        }
    }
    return Ket(state.factors(), std::move(amps));
}

double fidelity_up_to_phase(const Ket& a, const Ket& b) {
    if (a.factors() != b.factors()) throw LabelError("fidelity: states live on different factors");
    return std::norm(inner(a, b));
}

Matrix reduced_density(const Ket& state, std::vector<FactorLabel> subset) {
    std::sort(subset.begin(), subset.end());
    const auto rest = complement_of(state.factors(), subset);
    const auto offs_s = sub_offsets(state.factors(), subset);
    const auto offs_r = sub_offsets(state.factors(), labels_of(rest));
    const int n = static_cast<int>(offs_s.size());
    Matrix rho(n, n);
    for (size_t r = 0; r < offs_r.size(); ++r)
        for (int i = 0; i < n; ++i) {
            const Cx si = state.amp(offs_s[i] + offs_r[r]);
            if (si == Cx{}) continue;
            for (int j = 0; j < n; ++j)
                rho(i, j) += si * std::conj(state.amp(offs_s[j] + offs_r[r]));
        }
    return rho;
}

double purity(const Matrix& rho) {
    double s = 0.0;
    for (int i = 0; i < rho.rows(); ++i)
        for (int j = 0; j < rho.cols(); ++j) s += std::norm(rho(i, j));
    return s;
}

Ket extract_pure(const Ket& state, std::vector<FactorLabel> subset, double tol) {
    std::sort(subset.begin(), subset.end());
    const Matrix rho = reduced_density(state, subset);
    const double p = purity(rho);
    if (std::abs(p - 1.0) > tol)
        throw EntanglementError("restriction is not pure (purity " + std::to_string(p) + ")", std::abs(p - 1.0));
    // For rho = v v^dagger the column at the largest diagonal entry is v up to
    // scale and phase.
    int best = 0;
    for (int j = 1; j < rho.rows(); ++j)
        if (rho(j, j).real() > rho(best, best).real()) best = j;
    std::vector<Cx> v(rho.rows());
    const double s = 1.0 / std::sqrt(rho(best, best).real());
    for (int i = 0; i < rho.rows(); ++i) v[i] = rho(i, best) * s;
    std::vector<Factor> fs;
    for (const auto& f : state.factors())
        if (std::find(subset.begin(), subset.end(), f.label) != subset.end()) fs.push_back(f);
    return Ket(std::move(fs), std::move(v));
}

}  // namespace qswap
