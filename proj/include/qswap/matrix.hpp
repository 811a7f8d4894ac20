#pragma once

#include <vector>

#include "qswap/types.hpp"

namespace qswap {

// Dense complex matrix, row-major. Sizes stay tiny (at most d^2 x d^2 for a
// projector on a factor pair), so no effort is spent on blocking or views.
class Matrix {
  public:
    Matrix() = default;
    Matrix(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols) {}

    static Matrix identity(int n);

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    Cx& operator()(int i, int j) { return a_[static_cast<size_t>(i) * cols_ + j]; }
    const Cx& operator()(int i, int j) const { return a_[static_cast<size_t>(i) * cols_ + j]; }

    const std::vector<Cx>& data() const { return a_; }

    Matrix operator*(const Matrix& rhs) const;
    std::vector<Cx> operator*(const std::vector<Cx>& v) const;
    Matrix operator+(const Matrix& rhs) const;
    Matrix operator-(const Matrix& rhs) const;
    Matrix scaled(Cx s) const;

    Matrix conjugate() const;
    Matrix transpose() const;
    Matrix adjoint() const;

    Cx trace() const;
    double max_abs() const;

    // max-modulus entry of M^dagger M - 1.
    double unitary_deviation() const;
    bool is_unitary(double tol = kOpTol) const { return unitary_deviation() <= tol; }

    static Matrix kron(const Matrix& a, const Matrix& b);

  private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<Cx> a_;
};

double max_abs_diff(const Matrix& a, const Matrix& b);

// Entrywise comparison up to one global phase, referenced at the
// largest-modulus entry of `a` so near-zero entries never divide.
struct MatrixPhaseMatch {
    bool equal = false;
    Cx phase = Cx(1.0, 0.0);
    double max_residual = 0.0;
    // b vanishes where a has its reference entry, so no phase exists at all.
    bool support_mismatch = false;
};
MatrixPhaseMatch equal_up_to_phase(const Matrix& a, const Matrix& b, double tol = kPhaseTol);

// Vector helpers.
Cx vec_inner(const std::vector<Cx>& a, const std::vector<Cx>& b);
double vec_norm(const std::vector<Cx>& v);
std::vector<Cx> vec_conj(std::vector<Cx> v);
std::vector<Cx> vec_scaled(std::vector<Cx> v, Cx s);

// Cyclic shift X|j> = |j+1 mod d> and phase Z|j> = w^j |j>, w = exp(2 pi i/d).
Matrix weyl_x(int d);
Matrix weyl_z(int d);
// X^a Z^b. The d^2 of them label a complete orthogonal family of maximally
// entangled states when applied to one factor of any such state.
Matrix weyl(int d, int a, int b);
Matrix fourier(int d);

}  // namespace qswap
