#pragma once

#include <optional>
#include <string>
#include <vector>

#include "trackctl/matrix.hpp"
#include "trackctl/models.hpp"
#include "trackctl/simulate.hpp"
#include "trackctl/synthesis.hpp"

namespace trackctl {

// ============================================================================
// Disturbance tolerability
//
// A disturbed run is (epsilon, T)-tolerable when || y_i - y^m_i || <= epsilon
// for every i >= T. The quantifier ranges over an infinite horizon, so the
// verdict combines the recorded samples on [T, horizon] with an analytic
// geometric tail bound
//
//     || e_i || <= ||C|| sqrt(V_T / lambda_min(P)) * gamma^((i - T)/2),
//     gamma = 1 - lambda_min(Q) / lambda_max(P)  in [0, 1),
//
// evaluated at i = horizon + 1; monotone decay covers everything beyond.
// ============================================================================

struct ToleranceSpec {
    double epsilon = 0.0;  ///< output-error bound, must be > 0
    int t = 0;             ///< tolerance onset step, must be >= 0

    void validate() const;
};

/// Analytic decay certificate anchored at one trajectory step.
struct Certificate {
    double gamma = 0.0;         ///< contraction factor, in [0, 1)
    double lambda_min_p = 0.0;
    double lambda_max_p = 0.0;
    double lambda_min_q = 0.0;
    double v_onset = 0.0;       ///< Lyapunov value at the anchor step
    double c_norm = 0.0;        ///< ||C||
    int onset = 0;              ///< anchor step T

    /// Upper bound on ||e_i||, valid for i >= onset.
    double bound_at(int i) const;
};

/// Build the certificate for given gains at an anchor state. Throws
/// ContractError when gains lack the Lyapunov pair or produce an invalid
/// contraction factor.
Certificate make_certificate(const TrackingGains& gains, const Matrix& c, const Matrix& xtilde_onset,
                             int onset);

struct TolerabilityVerdict {
    bool tolerable = false;
    double max_err_after_t = 0.0;  ///< max recorded ||e_i||, i >= T
    bool certified_tail = false;   ///< analytic bound at horizon+1 <= epsilon
    double tail_bound = 0.0;
    Certificate certificate;
};

/// Decide (epsilon, T)-tolerability of a recorded run, tail included.
TolerabilityVerdict check_tolerable(const Trajectory& traj, const ToleranceSpec& spec);

/// Smallest T for which check_tolerable passes at the given epsilon, or
/// nullopt when no onset within the horizon works.
std::optional<int> minimal_tolerance_time(const Trajectory& traj, double epsilon);

struct CertifyResult {
    Certificate certificate;
    bool certified = false;  ///< bound_at(T) <= epsilon
};

/// Pure-analytic verdict: certified when the decay bound anchored at
/// xtilde_T already starts at or below epsilon (simulation-free, hence
/// conservative).
CertifyResult certify_tolerable(const TrackingGains& gains, const Matrix& c, const Matrix& xtilde_t,
                                const ToleranceSpec& spec);

// ---------------------------------------------------------------------------
// Constructive gain search
// ---------------------------------------------------------------------------

struct GainSearchSettings {
    double c_min = 0.05;  ///< smallest contraction scale tried
    int steps = 20;       ///< grid resolution between 1 and c_min
};

/// A grid point that could not be evaluated (singular scaled target or an
/// infeasible synthesis) together with the reason.
struct SkippedPoint {
    double c = 0.0;
    std::string reason;
};

struct GainSearchResult {
    bool feasible = false;
    double c = 0.0;                     ///< scale of the returned configuration
    std::optional<Matrix> k;
    std::optional<TrackingGains> gains;
    std::optional<Trajectory> trajectory;
    int t_achieved = -1;                ///< minimal onset of the returned gains (feasible case)
    double best_max_err_after_t = 0.0;  ///< max error of the returned configuration
    std::vector<SkippedPoint> skipped;
};

/// Search the family target(c) = c * base_target for a gain that makes the
/// disturbed run (epsilon, T)-tolerable: scan a descending grid from 1 to
/// c_min, take the first passing c, then refine by bisection (8 iterations)
/// toward the largest verified passing scale. When nothing passes, the
/// result carries the best configuration found (smallest max error past T)
/// with feasible = false. Skipped grid points are recorded, never fatal.
GainSearchResult synthesize_tolerant_gain(const PlantModel& plant, const ReferenceModel& reference,
                                          const Disturbance& d, const ToleranceSpec& spec,
                                          const Matrix& base_target,
                                          const GainSearchSettings& settings = {});

}  // namespace trackctl
