#include "trackctl/lyapunov.hpp"

#include <string>

#include "trackctl/errors.hpp"

namespace trackctl {

namespace {

void validate_pair(const Matrix& a_cl, const Matrix& q, const char* op) {
    if (a_cl.rows() != a_cl.cols()) {
        throw ShapeError(std::string(op) + ": a_cl must be square, got " + std::to_string(a_cl.rows()) +
                         "x" + std::to_string(a_cl.cols()));
    }
    if (q.rows() != a_cl.rows() || q.cols() != a_cl.cols()) {
        throw ShapeError(std::string(op) + ": Q must match a_cl (" + std::to_string(a_cl.rows()) + "x" +
                         std::to_string(a_cl.cols()) + "), got " + std::to_string(q.rows()) + "x" +
                         std::to_string(q.cols()));
    }
    if (!is_symmetric(q)) {
        throw ContractError(std::string(op) + ": Q must be symmetric");
    }
}

/// Final gate shared by both solvers: the returned solution must satisfy the
/// residual contract and carry a positive definite P, otherwise a_cl was not
/// Schur stable (or sat on a reciprocal eigenvalue pair) and we say so.
LyapunovSolution finish(const Matrix& a_cl, const Matrix& q, Matrix p, LyapunovMethod method,
                        int iterations) {
    // Symmetrize: the true solution is symmetric; rounding is not.
    Matrix ps = 0.5 * (p + transpose(p));
    const double residual = lyapunov_residual(a_cl, q, ps);
    if (residual > 1e-10 * frobenius_norm(q)) {
        throw NotSchurStableError("lyapunov: solution residual " + std::to_string(residual) +
                                  " violates the contract; a_cl is at or beyond the stability boundary");
    }
    if (!cholesky_pd(ps).has_value()) {
        throw NotSchurStableError("lyapunov: solution is not positive definite; a_cl is not Schur stable");
    }
    return LyapunovSolution{std::move(ps), residual, method, iterations};
}

}  // namespace

LyapunovSolution solve_direct(const Matrix& a_cl, const Matrix& q) {
    validate_pair(a_cl, q, "solve_direct");
    const std::size_t n = a_cl.rows();

    const Matrix at = transpose(a_cl);
    const Matrix system = Matrix::identity(n * n) - kronecker(at, at);
    Matrix p_vec;
    try {
        p_vec = solve_linear(system, vec(q));
    } catch (const SingularMatrixError&) {
        throw NotSchurStableError(
            "solve_direct: Lyapunov system is singular; a_cl has spectral radius >= 1 or a reciprocal "
            "eigenvalue pair");
    } catch (const NumericError&) {
        throw NotSchurStableError(
            "solve_direct: Lyapunov system is too ill-conditioned to certify; a_cl is at or beyond the "
            "stability boundary");
    }
    return finish(a_cl, q, unvec(p_vec, n, n), LyapunovMethod::direct, 0);
}

LyapunovSolution solve_iterative(const Matrix& a_cl, const Matrix& q, double tol, int max_iter) {
    validate_pair(a_cl, q, "solve_iterative");
    if (tol <= 0.0 || max_iter < 1) {
        throw ContractError("solve_iterative: tol must be positive and max_iter at least 1");
    }

    const Matrix at = transpose(a_cl);
    const double blowup = 1e12 * frobenius_norm(q);

    Matrix p = q;
    for (int k = 1; k <= max_iter; ++k) {
        Matrix next = at * p * a_cl + q;
        if (frobenius_norm(next) > blowup || !next.all_finite()) {
            throw NotSchurStableError("solve_iterative: iterates diverge; a_cl is not Schur stable");
        }
        const double change = frobenius_norm(next - p);
        p = std::move(next);
        if (change <= tol) {
            return finish(a_cl, q, std::move(p), LyapunovMethod::iterative, k);
        }
    }
    throw NotSchurStableError("solve_iterative: no convergence within " + std::to_string(max_iter) +
                              " iterations; a_cl is likely not Schur stable");
}

double lyapunov_residual(const Matrix& a_cl, const Matrix& q, const Matrix& p) {
    if (a_cl.rows() != a_cl.cols() || p.rows() != a_cl.rows() || p.cols() != a_cl.cols() ||
        q.rows() != a_cl.rows() || q.cols() != a_cl.cols()) {
        throw ShapeError("lyapunov_residual: a_cl, Q, P must share one square shape");
    }
    return frobenius_norm(p - transpose(a_cl) * p * a_cl - q);
}

SchurCertificate schur_certificate(const Matrix& a_cl) {
    if (a_cl.rows() != a_cl.cols() || a_cl.empty()) {
        throw ShapeError("schur_certificate: matrix must be square and nonempty");
    }
    try {
        LyapunovSolution sol = solve_direct(a_cl, Matrix::identity(a_cl.rows()));
        return SchurCertificate{true, std::move(sol.p)};
    } catch (const NotSchurStableError&) {
        return SchurCertificate{false, std::nullopt};
    }
}

}  // namespace trackctl
