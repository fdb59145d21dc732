#pragma once

#include <optional>
#include <vector>

#include "trackctl/matrix.hpp"
#include "trackctl/models.hpp"
#include "trackctl/synthesis.hpp"

namespace trackctl {

// ============================================================================
// Closed-loop simulation
//
// Runs the plant under u_i = K x_i + (H - K G) x^m_i against the autonomous
// reference, recording every quantity the convergence argument manipulates:
// the auxiliary state xt = x - Ge x^m, the Lyapunov value V = xt^T P xt and
// its increment. verify_convergence() then replays the algebra step by step
// as an independent check on the recorded run.
// ============================================================================

/// Initial-state disturbance: the plant starts from x0p = alpha * x0 + beta
/// instead of x0.
struct Disturbance {
    double alpha = 1.0;
    Matrix beta;  ///< n x 1
};

struct StepRecord {
    int i = 0;
    Matrix x;        ///< n x 1 plant state
    Matrix xm;       ///< n_m x 1 reference state
    Matrix xtilde;   ///< n x 1 auxiliary state x - Ge xm
    Matrix u;        ///< m x 1 control input
    Matrix y;        ///< p x 1 plant output
    Matrix ym;       ///< p x 1 reference output
    Matrix e;        ///< p x 1 tracking error y - ym
    double e_norm = 0.0;
    double v = 0.0;              ///< xtilde^T P xtilde
    std::optional<double> dv;    ///< V_i - V_{i-1}; absent at i = 0
};

/// A completed run. Carries copies of the models and gains that produced it
/// so downstream analysis (verification, tolerance certificates, CSV export)
/// needs no side channel.
struct Trajectory {
    std::vector<StepRecord> steps;  ///< horizon + 1 records, indices 0..horizon
    int horizon = 0;
    PlantModel plant;
    ReferenceModel reference;
    TrackingGains gains;
    std::optional<Disturbance> disturbance;
};

/// u = K x + (H - K G) xm.
Matrix control_input(const TrackingGains& gains, const Matrix& x, const Matrix& xm);

/// Iterate x_{i+1} = A x_i + B u_i and x^m_{i+1} = Am x^m_i from the nominal
/// initial states. Throws NumericError naming the step if any value goes
/// non-finite (an unstable configuration must fail loudly).
Trajectory simulate(const PlantModel& plant, const ReferenceModel& reference, const TrackingGains& gains,
                    int horizon);

/// Same run started from the disturbed initial state alpha * x0 + beta.
Trajectory simulate_perturbed(const PlantModel& plant, const ReferenceModel& reference,
                              const TrackingGains& gains, const Disturbance& d, int horizon);

/// Step-by-step replay of the closed-loop algebra on a recorded run:
///   r1: || xt_{i+1} - a_cl xt_i ||            (auxiliary-state recursion)
///   r2: | dV_{i+1} + xt_i^T Q xt_i |          (Lyapunov increment identity)
///   r3: || e_i - C xt_i ||                    (output error identity)
/// The run passes when the largest residual stays within
/// 1e-9 * (1 + ||xt_0||^2). V monotonicity is reported alongside.
struct ConvergenceReport {
    double recursion_residual = 0.0;    ///< max r1 over the run
    double increment_residual = 0.0;    ///< max r2
    double output_residual = 0.0;       ///< max r3
    double tolerance = 0.0;
    bool v_nonincreasing = false;
    bool pass() const {
        return recursion_residual <= tolerance && increment_residual <= tolerance &&
               output_residual <= tolerance;
    }
};

ConvergenceReport verify_convergence(const Trajectory& traj);

}  // namespace trackctl
