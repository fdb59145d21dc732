#pragma once

#include <optional>

#include "trackctl/matrix.hpp"

namespace trackctl {

// ============================================================================
// Discrete Lyapunov equation
//
//     P - a_cl^T P a_cl = Q
//
// solved by two independent routes so each can vouch for the other. A
// positive definite solution P doubles as the stability certificate for
// a_cl: it exists exactly when a_cl is Schur stable (spectral radius < 1)
// and no eigenvalue product lambda_i * lambda_j equals 1.
// ============================================================================

enum class LyapunovMethod { direct, iterative };

struct LyapunovSolution {
    Matrix p;                 ///< symmetric positive definite solution
    double residual = 0.0;    ///< ||P - a_cl^T P a_cl - Q||_F, always <= 1e-10 * ||Q||_F
    LyapunovMethod method = LyapunovMethod::direct;
    int iterations = 0;       ///< 0 for the direct route
};

/// Solve via the n^2 x n^2 linear system (I - a_cl^T (x) a_cl^T) vec(P) =
/// vec(Q), then symmetrize. Throws NotSchurStableError when the Kronecker
/// system is singular or the resulting P is not positive definite.
LyapunovSolution solve_direct(const Matrix& a_cl, const Matrix& q);

/// Fixed-point iteration P_{k+1} = a_cl^T P_k a_cl + Q starting from P_0 = Q.
/// Converges exactly when a_cl is Schur stable. Throws NotSchurStableError
/// when iterates blow past 1e12 * ||Q||_F or max_iter is exhausted.
LyapunovSolution solve_iterative(const Matrix& a_cl, const Matrix& q, double tol = 1e-12,
                                 int max_iter = 10000);

/// ||P - a_cl^T P a_cl - Q||_F for any conforming triple.
double lyapunov_residual(const Matrix& a_cl, const Matrix& q, const Matrix& p);

struct SchurCertificate {
    bool stable = false;
    std::optional<Matrix> p;  ///< positive definite witness when stable
};

/// Stability decided through the Lyapunov witness (solve_direct with Q = I),
/// never through a nonsymmetric eigensolver. All failure modes fold into
/// stable = false.
SchurCertificate schur_certificate(const Matrix& a_cl);

}  // namespace trackctl
