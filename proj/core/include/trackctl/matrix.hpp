#pragma once

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <vector>

namespace trackctl {

// ============================================================================
// Dense real matrices
//
// Row-major double storage with value semantics. Vectors are n x 1 (or 1 x n)
// matrices. Everything here is a pure function of its inputs; nothing keeps
// global state, so values can be shared freely across threads.
// ============================================================================

class Matrix {
public:
    /// Empty placeholder (0 x 0). Useful as a "not yet computed" member;
    /// every algebraic operation rejects it.
    Matrix() = default;

    /// rows x cols, zero-initialized. Both counts must be positive.
    Matrix(std::size_t rows, std::size_t cols);

    /// Build from nested braces: Matrix{{1, 2}, {3, 4}}. Rows must be equally
    /// long and every entry finite.
    Matrix(std::initializer_list<std::initializer_list<double>> rows);

    /// n x n identity.
    static Matrix identity(std::size_t n);

    /// Column vector from entries.
    static Matrix column(const std::vector<double>& entries);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return data_.empty(); }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    const std::vector<double>& data() const { return data_; }

    /// True when every entry is finite (no NaN, no infinity).
    bool all_finite() const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

// ---------------------------------------------------------------------------
// Elementwise algebra and products
// ---------------------------------------------------------------------------

/// Matrix product. Throws ShapeError naming both shapes on mismatch.
Matrix operator*(const Matrix& a, const Matrix& b);
Matrix operator*(double s, const Matrix& a);
Matrix operator*(const Matrix& a, double s);
Matrix operator+(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a);

/// Exact elementwise equality (shapes included). Used by determinism checks;
/// numeric comparisons should go through norms instead.
bool operator==(const Matrix& a, const Matrix& b);

Matrix transpose(const Matrix& a);

double frobenius_norm(const Matrix& a);
double max_abs(const Matrix& a);

/// Relative symmetry test: max |a_ij - a_ji| <= rel_tol * (1 + max|a|).
bool is_symmetric(const Matrix& a, double rel_tol = 1e-10);

// ---------------------------------------------------------------------------
// Solves, factorizations, spectra
// ---------------------------------------------------------------------------

/// Solve a * X = rhs by row-pivoted Gaussian elimination. The result is
/// checked against the residual contract ||a*X - rhs||_F <= 1e-10 * ||rhs||_F.
/// Throws SingularMatrixError when a pivot falls below
/// 1e-12 * max|entry| * dimension.
Matrix solve_linear(const Matrix& a, const Matrix& rhs);

/// Convenience: solve_linear(a, I).
Matrix inverse(const Matrix& a);

/// Pivot count under row-pivoted elimination; pivots with magnitude > tol
/// count. The single-argument form uses tol = 1e-9 * max(rows, cols) * max|a|.
std::size_t rank(const Matrix& a);
std::size_t rank(const Matrix& a, double tol);

/// Cholesky factor L (lower triangular, L * L^T = a) when a is positive
/// definite, std::nullopt otherwise (pivot <= 1e-12 * max diagonal entry).
/// Asymmetric input is a contract error, not a "not PD" verdict.
std::optional<Matrix> cholesky_pd(const Matrix& a);

/// Full spectrum of a symmetric matrix, ascending. Cyclic Jacobi rotations,
/// stopping when the off-diagonal Frobenius norm falls below 1e-12 * ||a||_F.
std::vector<double> sym_eigen(const Matrix& a);

/// Operator 2-norm: sqrt(lambda_max(a^T a)).
double spectral_norm(const Matrix& a);

// ---------------------------------------------------------------------------
// Kronecker machinery (backs the vectorized Lyapunov solve)
// ---------------------------------------------------------------------------

Matrix kronecker(const Matrix& a, const Matrix& b);

/// Column-stacking vec: vec(a)(i + j * rows) = a(i, j). This convention is
/// fixed project-wide; it gives vec(A^T X A) = (A^T (x) A^T) vec(X).
Matrix vec(const Matrix& a);
Matrix unvec(const Matrix& v, std::size_t rows, std::size_t cols);

}  // namespace trackctl
