#pragma once

// Minimal dense linear algebra for small regression problems: a row-major
// matrix type, Euclidean norms, a Householder-QR least-squares solver and a
// cyclic Jacobi eigensolver for symmetric matrices.

#include <cstddef>
#include <initializer_list>
#include <vector>

#include "collinlab/errors.hpp"

namespace collinlab {

using Vector = std::vector<double>;

/// Dense row-major matrix of doubles.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    /// Builds a matrix from a row-by-row brace list; rows must be equal length.
    static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows);
    static Matrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    Vector column(std::size_t j) const;
    void set_column(std::size_t j, const Vector& values);

    /// Copy of the matrix with column j removed.
    Matrix without_column(std::size_t j) const;

    const std::vector<double>& data() const { return data_; }

    bool operator==(const Matrix& other) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

Matrix operator*(const Matrix& a, const Matrix& b);
Vector operator*(const Matrix& a, const Vector& v);

/// X^t X without forming the transpose.
Matrix gram_matrix(const Matrix& x);

double euclidean_norm(const Vector& v);
double dot(const Vector& a, const Vector& b);

/// ||a - b||
double distance(const Vector& a, const Vector& b);

/// Least-squares solution together with the k-by-k triangular factor of the
/// decomposition, kept so callers can form (X^t X)^{-1} without squaring X.
struct LeastSquaresResult {
    Vector beta;
    Matrix r;  // upper triangular, k x k
};

/// Solves min ||y - X beta|| by Householder QR. Throws RankDeficientError
/// when some |R_jj| falls below 1e-10 times the largest |R_ii|.
LeastSquaresResult least_squares_qr(const Matrix& x, const Vector& y);

/// QR solve returning only the coefficient vector.
Vector solve_least_squares(const Matrix& x, const Vector& y);

/// Inverse of X^t X computed from the triangular factor of the QR
/// decomposition: (X^t X)^{-1} = R^{-1} R^{-t}.
Matrix gram_inverse_from_r(const Matrix& r);

/// All eigenvalues of a symmetric matrix, sorted descending. Cyclic Jacobi
/// rotations; convergence when the off-diagonal Frobenius norm drops below
/// 1e-12 times the Frobenius norm of the input.
Vector symmetric_eigenvalues(const Matrix& m);

/// Each column divided by its Euclidean norm.
Matrix unit_length_scale(const Matrix& x);

}  // namespace collinlab
