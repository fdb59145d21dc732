#include "trackctl/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "trackctl/errors.hpp"

namespace trackctl {

namespace {

std::string shape_of(const Matrix& a) {
    return std::to_string(a.rows()) + "x" + std::to_string(a.cols());
}

void require_nonempty(const Matrix& a, const char* op) {
    if (a.empty()) {
        throw ShapeError(std::string(op) + ": empty matrix operand");
    }
}

void require_same_shape(const Matrix& a, const Matrix& b, const char* op) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw ShapeError(std::string(op) + ": shape mismatch " + shape_of(a) + " vs " + shape_of(b));
    }
}

void require_square(const Matrix& a, const char* op) {
    if (a.rows() != a.cols()) {
        throw ShapeError(std::string(op) + ": matrix must be square, got " + shape_of(a));
    }
}

}  // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {
    if (rows == 0 || cols == 0) {
        throw ShapeError("Matrix: row and column counts must be positive, got " + std::to_string(rows) +
                         "x" + std::to_string(cols));
    }
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
    rows_ = rows.size();
    cols_ = rows_ ? rows.begin()->size() : 0;
    if (rows_ == 0 || cols_ == 0) {
        throw ShapeError("Matrix: literal must have at least one row and one column");
    }
    data_.reserve(rows_ * cols_);
    for (const auto& row : rows) {
        if (row.size() != cols_) {
            throw ShapeError("Matrix: ragged literal, expected " + std::to_string(cols_) +
                             " columns, got " + std::to_string(row.size()));
        }
        for (double x : row) {
            if (!std::isfinite(x)) {
                throw NumericError("Matrix: non-finite entry in literal");
            }
            data_.push_back(x);
        }
    }
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = 1.0;
    }
    return m;
}

Matrix Matrix::column(const std::vector<double>& entries) {
    if (entries.empty()) {
        throw ShapeError("Matrix::column: empty entry list");
    }
    Matrix m(entries.size(), 1);
    for (std::size_t i = 0; i < entries.size(); ++i) {
        m(i, 0) = entries[i];
    }
    return m;
}

bool Matrix::all_finite() const {
    return std::all_of(data_.begin(), data_.end(), [](double x) { return std::isfinite(x); });
}

Matrix operator*(const Matrix& a, const Matrix& b) {
    require_nonempty(a, "matmul");
    require_nonempty(b, "matmul");
    if (a.cols() != b.rows()) {
        throw ShapeError("matmul: cannot multiply " + shape_of(a) + " by " + shape_of(b));
    }
    Matrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) {
                c(i, j) += aik * b(k, j);
            }
        }
    }
    return c;
}

Matrix operator*(double s, const Matrix& a) {
    require_nonempty(a, "scale");
    Matrix c = a;
    for (std::size_t i = 0; i < c.rows(); ++i) {
        for (std::size_t j = 0; j < c.cols(); ++j) {
            c(i, j) *= s;
        }
    }
    return c;
}

Matrix operator*(const Matrix& a, double s) { return s * a; }

Matrix operator+(const Matrix& a, const Matrix& b) {
    require_nonempty(a, "add");
    require_same_shape(a, b, "add");
    Matrix c = a;
    for (std::size_t i = 0; i < c.rows(); ++i) {
        for (std::size_t j = 0; j < c.cols(); ++j) {
            c(i, j) += b(i, j);
        }
    }
    return c;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
    require_nonempty(a, "subtract");
    require_same_shape(a, b, "subtract");
    Matrix c = a;
    for (std::size_t i = 0; i < c.rows(); ++i) {
        for (std::size_t j = 0; j < c.cols(); ++j) {
            c(i, j) -= b(i, j);
        }
    }
    return c;
}

Matrix operator-(const Matrix& a) { return -1.0 * a; }

bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows() == b.rows() && a.cols() == b.cols() && a.data() == b.data();
}

Matrix transpose(const Matrix& a) {
    require_nonempty(a, "transpose");
    Matrix t(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            t(j, i) = a(i, j);
        }
    }
    return t;
}

double frobenius_norm(const Matrix& a) {
    double sum = 0.0;
    for (double x : a.data()) {
        sum += x * x;
    }
    return std::sqrt(sum);
}

double max_abs(const Matrix& a) {
    double m = 0.0;
    for (double x : a.data()) {
        m = std::max(m, std::abs(x));
    }
    return m;
}

bool is_symmetric(const Matrix& a, double rel_tol) {
    if (a.rows() != a.cols() || a.empty()) {
        return false;
    }
    const double bound = rel_tol * (1.0 + max_abs(a));
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = i + 1; j < a.cols(); ++j) {
            if (std::abs(a(i, j) - a(j, i)) > bound) {
                return false;
            }
        }
    }
    return true;
}

Matrix solve_linear(const Matrix& a, const Matrix& rhs) {
    require_nonempty(a, "solve_linear");
    require_nonempty(rhs, "solve_linear");
    require_square(a, "solve_linear");
    if (rhs.rows() != a.rows()) {
        throw ShapeError("solve_linear: rhs has " + std::to_string(rhs.rows()) + " rows, expected " +
                         std::to_string(a.rows()));
    }

    const std::size_t n = a.rows();
    const std::size_t w = rhs.cols();
    const double pivot_floor = 1e-12 * max_abs(a) * static_cast<double>(n);

    // Work on an augmented copy [a | rhs].
    Matrix work(n, n + w);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) work(i, j) = a(i, j);
        for (std::size_t j = 0; j < w; ++j) work(i, n + j) = rhs(i, j);
    }

    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot_row = col;
        double best = std::abs(work(col, col));
        for (std::size_t r = col + 1; r < n; ++r) {
            const double mag = std::abs(work(r, col));
            if (mag > best) {
                best = mag;
                pivot_row = r;
            }
        }
        if (best <= pivot_floor) {
            throw SingularMatrixError("solve_linear: matrix is singular to working precision (pivot " +
                                      std::to_string(best) + " at column " + std::to_string(col) + ")");
        }
        if (pivot_row != col) {
            for (std::size_t j = 0; j < n + w; ++j) {
                std::swap(work(col, j), work(pivot_row, j));
            }
        }
        const double pivot = work(col, col);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col) continue;
            const double factor = work(r, col) / pivot;
            if (factor == 0.0) continue;
            for (std::size_t j = col; j < n + w; ++j) {
                work(r, j) -= factor * work(col, j);
            }
        }
    }

    Matrix x(n, w);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < w; ++j) {
            x(i, j) = work(i, n + j) / work(i, i);
        }
    }

    // The solution contract is part of the interface, not merely a hope:
    // refuse to return an X whose residual betrays a near-singular system
    // that slipped past the pivot test.
    const double residual = frobenius_norm(a * x - rhs);
    if (residual > 1e-10 * frobenius_norm(rhs)) {
        throw NumericError("solve_linear: residual " + std::to_string(residual) +
                           " exceeds contract for this system");
    }
    return x;
}

Matrix inverse(const Matrix& a) {
    require_square(a, "inverse");
    return solve_linear(a, Matrix::identity(a.rows()));
}

std::size_t rank(const Matrix& a) {
    const double tol = 1e-9 * static_cast<double>(std::max(a.rows(), a.cols())) * max_abs(a);
    return rank(a, tol);
}

std::size_t rank(const Matrix& a, double tol) {
    require_nonempty(a, "rank");
    if (tol < 0.0) {
        throw ContractError("rank: tolerance must be nonnegative");
    }
    Matrix work = a;
    const std::size_t n = work.rows();
    const std::size_t m = work.cols();
    std::size_t r = 0;
    for (std::size_t col = 0; col < m && r < n; ++col) {
        std::size_t pivot_row = r;
        double best = std::abs(work(r, col));
        for (std::size_t i = r + 1; i < n; ++i) {
            const double mag = std::abs(work(i, col));
            if (mag > best) {
                best = mag;
                pivot_row = i;
            }
        }
        if (best <= tol) {
            continue;
        }
        if (pivot_row != r) {
            for (std::size_t j = 0; j < m; ++j) {
                std::swap(work(r, j), work(pivot_row, j));
            }
        }
        for (std::size_t i = r + 1; i < n; ++i) {
            const double factor = work(i, col) / work(r, col);
            for (std::size_t j = col; j < m; ++j) {
                work(i, j) -= factor * work(r, j);
            }
        }
        ++r;
    }
    return r;
}

std::optional<Matrix> cholesky_pd(const Matrix& a) {
    require_nonempty(a, "cholesky_pd");
    require_square(a, "cholesky_pd");
    if (!is_symmetric(a)) {
        throw ContractError("cholesky_pd: input is not symmetric");
    }

    const std::size_t n = a.rows();
    double max_diag = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        max_diag = std::max(max_diag, a(i, i));
    }
    const double pivot_floor = 1e-12 * max_diag;

    Matrix l(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        double d = a(j, j);
        for (std::size_t k = 0; k < j; ++k) {
            d -= l(j, k) * l(j, k);
        }
        if (d <= pivot_floor) {
            return std::nullopt;
        }
        l(j, j) = std::sqrt(d);
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = a(i, j);
            for (std::size_t k = 0; k < j; ++k) {
                s -= l(i, k) * l(j, k);
            }
            l(i, j) = s / l(j, j);
        }
    }
    return l;
}

std::vector<double> sym_eigen(const Matrix& a) {
    require_nonempty(a, "sym_eigen");
    require_square(a, "sym_eigen");
    if (!is_symmetric(a)) {
        throw ContractError("sym_eigen: input is not symmetric");
    }

    const std::size_t n = a.rows();
    Matrix w = a;
    const double total_norm = frobenius_norm(a);
    const double stop = 1e-12 * total_norm;

    auto off_diagonal_norm = [&]() {
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                sum += 2.0 * w(i, j) * w(i, j);
            }
        }
        return std::sqrt(sum);
    };

    // Cyclic Jacobi: sweep all (p, q) pairs, each rotation zeroing w(p, q).
    // Unconditionally convergent for symmetric input; a few dozen sweeps is
    // already far more than desk-scale matrices need.
    const int max_sweeps = 100;
    for (int sweep = 0; sweep < max_sweeps && off_diagonal_norm() > stop; ++sweep) {
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                if (w(p, q) == 0.0) continue;
                const double theta = (w(q, q) - w(p, p)) / (2.0 * w(p, q));
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double wkp = w(k, p);
                    const double wkq = w(k, q);
                    w(k, p) = c * wkp - s * wkq;
                    w(k, q) = s * wkp + c * wkq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double wpk = w(p, k);
                    const double wqk = w(q, k);
                    w(p, k) = c * wpk - s * wqk;
                    w(q, k) = s * wpk + c * wqk;
                }
            }
        }
    }

    std::vector<double> eigs(n);
    for (std::size_t i = 0; i < n; ++i) {
        eigs[i] = w(i, i);
    }
    std::sort(eigs.begin(), eigs.end());
    return eigs;
}

double spectral_norm(const Matrix& a) {
    require_nonempty(a, "spectral_norm");
    // a^T a built with a k-major accumulation is symmetric to the last bit,
    // so sym_eigen accepts it without a symmetrization pass.
    const Matrix gram = transpose(a) * a;
    const double lam = sym_eigen(gram).back();
    return std::sqrt(std::max(lam, 0.0));
}

Matrix kronecker(const Matrix& a, const Matrix& b) {
    require_nonempty(a, "kronecker");
    require_nonempty(b, "kronecker");
    Matrix k(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            const double aij = a(i, j);
            if (aij == 0.0) continue;
            for (std::size_t r = 0; r < b.rows(); ++r) {
                for (std::size_t c = 0; c < b.cols(); ++c) {
                    k(i * b.rows() + r, j * b.cols() + c) = aij * b(r, c);
                }
            }
        }
    }
    return k;
}

Matrix vec(const Matrix& a) {
    require_nonempty(a, "vec");
    Matrix v(a.rows() * a.cols(), 1);
    for (std::size_t j = 0; j < a.cols(); ++j) {
        for (std::size_t i = 0; i < a.rows(); ++i) {
            v(j * a.rows() + i, 0) = a(i, j);
        }
    }
    return v;
}

Matrix unvec(const Matrix& v, std::size_t rows, std::size_t cols) {
    require_nonempty(v, "unvec");
    if (v.cols() != 1 || v.rows() != rows * cols) {
        throw ShapeError("unvec: expected " + std::to_string(rows * cols) + "x1 vector, got " + shape_of(v));
    }
    Matrix a(rows, cols);
    for (std::size_t j = 0; j < cols; ++j) {
        for (std::size_t i = 0; i < rows; ++i) {
            a(i, j) = v(j * rows + i, 0);
        }
    }
    return a;
}

}  // namespace trackctl
