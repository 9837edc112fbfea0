#include "collinlab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace collinlab {

namespace {

constexpr double kRankRtol = 1e-10;       // on QR diagonal magnitudes
constexpr double kSymmetryRtol = 1e-10;   // on max |entry|
constexpr double kJacobiRtol = 1e-12;     // off-diagonal vs Frobenius norm

}  // namespace

Matrix Matrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
    const std::size_t r = rows.size();
    const std::size_t c = r == 0 ? 0 : rows.begin()->size();
    Matrix m(r, c);
    std::size_t i = 0;
    for (const auto& row : rows) {
        if (row.size() != c) {
            throw DimensionMismatchError("from_rows: ragged row list");
        }
        std::size_t j = 0;
        for (double v : row) m(i, j++) = v;
        ++i;
    }
    return m;
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Vector Matrix::column(std::size_t j) const {
    Vector out(rows_);
    for (std::size_t i = 0; i < rows_; ++i) out[i] = (*this)(i, j);
    return out;
}

void Matrix::set_column(std::size_t j, const Vector& values) {
    if (values.size() != rows_) {
        throw DimensionMismatchError("set_column: length mismatch");
    }
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = values[i];
}

Matrix Matrix::without_column(std::size_t j) const {
    Matrix out(rows_, cols_ - 1);
    for (std::size_t i = 0; i < rows_; ++i) {
        std::size_t t = 0;
        for (std::size_t c = 0; c < cols_; ++c) {
            if (c == j) continue;
            out(i, t++) = (*this)(i, c);
        }
    }
    return out;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) throw DimensionMismatchError("matrix product");
    Matrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) {
                out(i, j) += aik * b(k, j);
            }
        }
    }
    return out;
}

Vector operator*(const Matrix& a, const Vector& v) {
    if (a.cols() != v.size()) throw DimensionMismatchError("matrix-vector product");
    Vector out(a.rows(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * v[j];
        out[i] = s;
    }
    return out;
}

Matrix gram_matrix(const Matrix& x) {
    const std::size_t n = x.rows(), k = x.cols();
    Matrix g(k, k);
    for (std::size_t a = 0; a < k; ++a) {
        for (std::size_t b = a; b < k; ++b) {
            double s = 0.0;
            for (std::size_t i = 0; i < n; ++i) s += x(i, a) * x(i, b);
            g(a, b) = s;
            g(b, a) = s;
        }
    }
    return g;
}

double euclidean_norm(const Vector& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

double dot(const Vector& a, const Vector& b) {
    if (a.size() != b.size()) throw DimensionMismatchError("dot: length mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double distance(const Vector& a, const Vector& b) {
    if (a.size() != b.size()) throw DimensionMismatchError("distance: length mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return std::sqrt(s);
}

LeastSquaresResult least_squares_qr(const Matrix& x, const Vector& y) {
    const std::size_t n = x.rows(), k = x.cols();
    if (n != y.size()) {
        throw DimensionMismatchError("least_squares: rows(X) != length(y)");
    }
    if (n < k) {
        throw DimensionMismatchError("least_squares: fewer rows than columns");
    }

    // Householder reduction of [X | y] to upper triangular form, in place.
    Matrix a = x;
    Vector rhs = y;
    for (std::size_t j = 0; j < k; ++j) {
        double colnorm = 0.0;
        for (std::size_t i = j; i < n; ++i) colnorm += a(i, j) * a(i, j);
        colnorm = std::sqrt(colnorm);
        if (colnorm == 0.0) continue;  // caught by the rank check below

        const double alpha = a(j, j) >= 0.0 ? -colnorm : colnorm;
        // v = x_j - alpha e_j, stored over column j below the diagonal
        double vnorm2 = colnorm * colnorm - 2.0 * alpha * a(j, j) + alpha * alpha;
        Vector v(n - j);
        v[0] = a(j, j) - alpha;
        for (std::size_t i = j + 1; i < n; ++i) v[i - j] = a(i, j);
        if (vnorm2 == 0.0) continue;

        a(j, j) = alpha;
        for (std::size_t i = j + 1; i < n; ++i) a(i, j) = 0.0;

        for (std::size_t c = j + 1; c < k; ++c) {
            double proj = 0.0;
            for (std::size_t i = j; i < n; ++i) proj += v[i - j] * a(i, c);
            const double f = 2.0 * proj / vnorm2;
            for (std::size_t i = j; i < n; ++i) a(i, c) -= f * v[i - j];
        }
        double proj = 0.0;
        for (std::size_t i = j; i < n; ++i) proj += v[i - j] * rhs[i];
        const double f = 2.0 * proj / vnorm2;
        for (std::size_t i = j; i < n; ++i) rhs[i] -= f * v[i - j];
    }

    double max_diag = 0.0;
    for (std::size_t j = 0; j < k; ++j) max_diag = std::max(max_diag, std::abs(a(j, j)));
    for (std::size_t j = 0; j < k; ++j) {
        if (std::abs(a(j, j)) <= kRankRtol * max_diag) {
            throw RankDeficientError("least_squares: numerical rank below " +
                                     std::to_string(k) + " columns");
        }
    }

    LeastSquaresResult out;
    out.beta.assign(k, 0.0);
    for (std::size_t j = k; j-- > 0;) {
        double s = rhs[j];
        for (std::size_t c = j + 1; c < k; ++c) s -= a(j, c) * out.beta[c];
        out.beta[j] = s / a(j, j);
    }
    out.r = Matrix(k, k);
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = i; j < k; ++j) out.r(i, j) = a(i, j);
    }
    return out;
}

Vector solve_least_squares(const Matrix& x, const Vector& y) {
    return least_squares_qr(x, y).beta;
}

Matrix gram_inverse_from_r(const Matrix& r) {
    const std::size_t k = r.rows();
    // Invert the triangular factor by back substitution, one unit column at
    // a time, then form R^{-1} R^{-t}.
    Matrix rinv(k, k);
    for (std::size_t c = 0; c < k; ++c) {
        for (std::size_t j = k; j-- > 0;) {
            double s = (j == c) ? 1.0 : 0.0;
            for (std::size_t t = j + 1; t < k; ++t) s -= r(j, t) * rinv(t, c);
            rinv(j, c) = s / r(j, j);
        }
    }
    Matrix out(k, k);
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = i; j < k; ++j) {
            double s = 0.0;
            for (std::size_t t = 0; t < k; ++t) s += rinv(i, t) * rinv(j, t);
            out(i, j) = s;
            out(j, i) = s;
        }
    }
    return out;
}

Vector symmetric_eigenvalues(const Matrix& m) {
    const std::size_t n = m.rows();
    if (n != m.cols()) throw NotSquareError("symmetric_eigenvalues: matrix not square");

    double max_abs = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) max_abs = std::max(max_abs, std::abs(m(i, j)));
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (std::abs(m(i, j) - m(j, i)) > kSymmetryRtol * max_abs) {
                throw NotSymmetricError("symmetric_eigenvalues: matrix not symmetric");
            }
        }
    }

    Matrix a = m;
    double frob = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) frob += a(i, j) * a(i, j);
    }
    frob = std::sqrt(frob);
    const double threshold = kJacobiRtol * frob;

    auto off_diagonal = [&]() {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) s += 2.0 * a(i, j) * a(i, j);
        }
        return std::sqrt(s);
    };

    const int max_sweeps = 100;
    int sweep = 0;
    while (off_diagonal() > threshold) {
        if (++sweep > max_sweeps) {
            throw Error("symmetric_eigenvalues: Jacobi iteration did not converge");
        }
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;

                const double app = a(p, p), aqq = a(q, q);
                a(p, p) = c * c * app - 2.0 * s * c * apq + s * s * aqq;
                a(q, q) = s * s * app + 2.0 * s * c * apq + c * c * aqq;
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                for (std::size_t i = 0; i < n; ++i) {
                    if (i == p || i == q) continue;
                    const double aip = a(i, p), aiq = a(i, q);
                    a(i, p) = c * aip - s * aiq;
                    a(p, i) = a(i, p);
                    a(i, q) = s * aip + c * aiq;
                    a(q, i) = a(i, q);
                }
            }
        }
    }

    Vector eig(n);
    for (std::size_t i = 0; i < n; ++i) eig[i] = a(i, i);
    std::sort(eig.begin(), eig.end(), std::greater<>());
    return eig;
}

Matrix unit_length_scale(const Matrix& x) {
    Matrix out = x;
    for (std::size_t j = 0; j < x.cols(); ++j) {
        double norm = 0.0;
        for (std::size_t i = 0; i < x.rows(); ++i) norm += x(i, j) * x(i, j);
        norm = std::sqrt(norm);
        if (norm == 0.0) {
            throw ZeroColumnError("unit_length_scale: column " + std::to_string(j) +
                                  " is zero");
        }
        for (std::size_t i = 0; i < x.rows(); ++i) out(i, j) = x(i, j) / norm;
    }
    return out;
}

}  // namespace collinlab
