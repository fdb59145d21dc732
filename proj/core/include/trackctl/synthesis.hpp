#pragma once

#include "trackctl/matrix.hpp"
#include "trackctl/models.hpp"

namespace trackctl {

// ============================================================================
// Gain synthesis for model-following control
//
// Given a stabilizing feedback K, the tracking gains are
//
//     R  = C (A + BK)^{-1} B K
//     G  = R^T (R R^T)^{-1} Cm
//     Ge = (A + BK)^{-1} B K G
//     H  = B^T (B B^T)^{-1} Ge Am
//
// and the control law u_i = K x_i + (H - K G) x^m_i then makes the auxiliary
// state xt = x - Ge x^m obey xt_{i+1} = (A + BK) xt_i, so the tracking error
// e = C xt decays with the closed loop.
// ============================================================================

/// Everything the synthesis produces. P is the Lyapunov witness for
/// a_cl = A + BK with the stored Q.
struct TrackingGains {
    Matrix k;     ///< m x n feedback gain
    Matrix q;     ///< n x n Lyapunov right-hand side (symmetric PD)
    Matrix p;     ///< n x n Lyapunov solution
    Matrix r;     ///< p x n
    Matrix g;     ///< n x n_m
    Matrix ge;    ///< n x n_m
    Matrix h;     ///< m x n_m
    Matrix a_cl;  ///< n x n closed loop A + BK
};

struct ControllabilityReport {
    bool controllable = false;
    Matrix ctrb;           ///< [B, AB, ..., A^{n-1}B], n x (n*m)
    std::size_t rank = 0;  ///< rank of ctrb
};

/// Rank test on the controllability matrix.
ControllabilityReport is_controllable(const PlantModel& plant);

/// Solve B K = a_cl_target - A through the right inverse of B, which exists
/// exactly when B has full row rank (so m >= n). Within that regime any
/// target is achieved exactly; this is verified and enforced.
/// Throws InfeasibleError when B B^T is singular.
Matrix place_gain(const PlantModel& plant, const Matrix& a_cl_target);

/// Build the complete gain set for tracking, including the Lyapunov witness
/// P for the supplied Q. Throws NotSchurStableError for an unstable closed
/// loop, SingularMatrixError when A + BK is singular (deadbeat targets are
/// rejected because the construction inverts the closed loop), and
/// InfeasibleError when R R^T or B B^T is singular.
TrackingGains tracking_gains(const PlantModel& plant, const ReferenceModel& reference, const Matrix& k,
                             const Matrix& q);

/// One identity from the synthesis algebra: its residual and the threshold
/// it was judged against.
struct IdentityCheck {
    double residual = 0.0;
    double tolerance = 0.0;
    bool pass() const { return residual <= tolerance; }
};

/// Residual report for the three gain identities plus the Lyapunov equation.
/// Never throws; failures ride in the report.
struct GainValidation {
    IdentityCheck output_match;      ///< C Ge = Cm
    IdentityCheck feedforward;       ///< B H = Ge Am
    IdentityCheck closure;           ///< (A + BK) Ge = B K G
    IdentityCheck lyapunov;          ///< P - a_cl^T P a_cl = Q
    bool pass() const {
        return output_match.pass() && feedforward.pass() && closure.pass() && lyapunov.pass();
    }
};

GainValidation validate_gains(const TrackingGains& gains, const PlantModel& plant,
                              const ReferenceModel& reference);

}  // namespace trackctl
