#include "qswap/matrix.hpp"

#include <cmath>
#include <numbers>

namespace qswap {

Matrix Matrix::identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = Cx(1.0, 0.0);
    return m;
}

Matrix Matrix::operator*(const Matrix& rhs) const {
    if (cols_ != rhs.rows_) throw ShapeError("matrix product: inner dimensions differ");
    Matrix out(rows_, rhs.cols_);
    for (int i = 0; i < rows_; ++i) {
        for (int k = 0; k < cols_; ++k) {
            const Cx aik = (*this)(i, k);
            if (aik == Cx{}) continue;
            for (int j = 0; j < rhs.cols_; ++j) out(i, j) += aik * rhs(k, j);
        }
    }
    return out;
}

std::vector<Cx> Matrix::operator*(const std::vector<Cx>& v) const {
    if (static_cast<size_t>(cols_) != v.size()) throw ShapeError("matrix-vector product: dimension mismatch");
    std::vector<Cx> out(rows_);
    for (int i = 0; i < rows_; ++i) {
        Cx s{};
        for (int j = 0; j < cols_; ++j) s += (*this)(i, j) * v[j];
        out[i] = s;
    }
    return out;
}

Matrix Matrix::operator+(const Matrix& rhs) const {
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_) throw ShapeError("matrix sum: shape mismatch");
    Matrix out = *this;
    for (size_t i = 0; i < a_.size(); ++i) out.a_[i] += rhs.a_[i];
    return out;
}

Matrix Matrix::operator-(const Matrix& rhs) const {
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_) throw ShapeError("matrix difference: shape mismatch");
    Matrix out = *this;
    for (size_t i = 0; i < a_.size(); ++i) out.a_[i] -= rhs.a_[i];
    return out;
}

Matrix Matrix::scaled(Cx s) const {
    Matrix out = *this;
    for (auto& x : out.a_) x *= s;
    return out;
}

Matrix Matrix::conjugate() const {
    Matrix out = *this;
    for (auto& x : out.a_) x = std::conj(x);
    return out;
}

Matrix Matrix::transpose() const {
    Matrix out(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
    return out;
}

Matrix Matrix::adjoint() const { return transpose().conjugate(); }

Cx Matrix::trace() const {
    Cx s{};
    for (int i = 0; i < rows_ && i < cols_; ++i) s += (*this)(i, i);
    return s;
}

double Matrix::max_abs() const {
    double m = 0.0;
    for (const auto& x : a_) m = std::max(m, std::abs(x));
    return m;
}

double Matrix::unitary_deviation() const {
    if (rows_ != cols_) return 1.0;
    return max_abs_diff(adjoint() * (*this), identity(rows_));
}

Matrix Matrix::kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j)
            for (int k = 0; k < b.rows(); ++k)
                for (int l = 0; l < b.cols(); ++l)
                    out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
    return out;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw ShapeError("max_abs_diff: shape mismatch");
    double m = 0.0;
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) m = std::max(m, std::abs(a(i, j) - b(i, j)));
    return m;
}

MatrixPhaseMatch equal_up_to_phase(const Matrix& a, const Matrix& b, double tol) {
    MatrixPhaseMatch out;
    if (a.rows() != b.rows() || a.cols() != b.cols()) return out;
    int pi = 0, pj = 0;
    double best = -1.0;
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j)
            if (std::abs(a(i, j)) > best) best = std::abs(a(i, j)), pi = i, pj = j;
    if (best <= tol) {  // a is (numerically) zero; equal iff b is too
        out.max_residual = b.max_abs();
        out.equal = out.max_residual <= tol;
        return out;
    }
    if (std::abs(b(pi, pj)) <= tol) {
        out.max_residual = best;
        out.support_mismatch = true;
        return out;
    }
    Cx ratio = a(pi, pj) / b(pi, pj);
    out.phase = ratio / std::abs(ratio);
    out.max_residual = max_abs_diff(a, b.scaled(out.phase));
    out.equal = out.max_residual <= tol;
    return out;
}

Cx vec_inner(const std::vector<Cx>& a, const std::vector<Cx>& b) {
    if (a.size() != b.size()) throw ShapeError("vec_inner: length mismatch");
    Cx s{};
    for (size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
    return s;
}

double vec_norm(const std::vector<Cx>& v) {
    double s = 0.0;
    for (const auto& x : v) s += std::norm(x);
    return std::sqrt(s);
}

std::vector<Cx> vec_conj(std::vector<Cx> v) {
    for (auto& x : v) x = std::conj(x);
    return v;
}

std::vector<Cx> vec_scaled(std::vector<Cx> v, Cx s) {
    for (auto& x : v) x *= s;
    return v;
}

Matrix weyl_x(int d) {
    Matrix m(d, d);
    for (int j = 0; j < d; ++j) m((j + 1) % d, j) = Cx(1.0, 0.0);
    return m;
}

Matrix weyl_z(int d) {
    Matrix m(d, d);
    for (int j = 0; j < d; ++j) {
        const double ang = 2.0 * std::numbers::pi * j / d;
        m(j, j) = Cx(std::cos(ang), std::sin(ang));
    }
    return m;
}

Matrix weyl(int d, int a, int b) {
    Matrix m(d, d);
    for (int j = 0; j < d; ++j) {
        const double ang = 2.0 * std::numbers::pi * ((static_cast<long long>(b) * j) % d) / d;
        m((j + a) % d, j) = Cx(std::cos(ang), std::sin(ang));
    }
    return m;
}

Matrix fourier(int d) {
    Matrix m(d, d);
    const double s = 1.0 / std::sqrt(static_cast<double>(d));
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            const double ang = 2.0 * std::numbers::pi * ((static_cast<long long>(i) * j) % d) / d;
            m(i, j) = s * Cx(std::cos(ang), std::sin(ang));
        }
    return m;
}

}  // namespace qswap
