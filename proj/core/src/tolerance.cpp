#include "trackctl/tolerance.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "trackctl/errors.hpp"
#include "trackctl/lyapunov.hpp"

namespace trackctl {

void ToleranceSpec::validate() const {
    if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
        throw ContractError("tolerance: epsilon must be positive and finite");
    }
    if (t < 0) {
        throw ContractError("tolerance: onset T must be nonnegative, got " + std::to_string(t));
    }
}

double Certificate::bound_at(int i) const {
    if (i < onset) {
        throw ContractError("Certificate::bound_at: step " + std::to_string(i) +
                            " is before the anchor step " + std::to_string(onset));
    }
    return c_norm * std::sqrt(v_onset / lambda_min_p) *
           std::pow(gamma, static_cast<double>(i - onset) / 2.0);
}

Certificate make_certificate(const TrackingGains& gains, const Matrix& c, const Matrix& xtilde_onset,
                             int onset) {
    if (gains.p.empty() || gains.q.empty()) {
        throw ContractError("make_certificate: gains lack the Lyapunov pair P, Q");
    }
    if (onset < 0) {
        throw ContractError("make_certificate: onset must be nonnegative");
    }
    if (xtilde_onset.cols() != 1 || xtilde_onset.rows() != gains.p.rows()) {
        throw ShapeError("make_certificate: xtilde must be " + std::to_string(gains.p.rows()) + "x1");
    }

    const std::vector<double> p_eigs = sym_eigen(gains.p);
    const std::vector<double> q_eigs = sym_eigen(gains.q);

    Certificate cert;
    cert.lambda_min_p = p_eigs.front();
    cert.lambda_max_p = p_eigs.back();
    cert.lambda_min_q = q_eigs.front();
    cert.c_norm = spectral_norm(c);
    cert.onset = onset;
    if (cert.lambda_min_p <= 0.0 || cert.lambda_min_q <= 0.0) {
        throw ContractError("make_certificate: P and Q must both be positive definite");
    }
    cert.gamma = 1.0 - cert.lambda_min_q / cert.lambda_max_p;
    if (cert.gamma < 0.0 || cert.gamma >= 1.0) {
        // For a genuine Lyapunov pair P >= Q forces gamma into [0, 1); being
        // outside means the supplied P, Q are not such a pair.
        throw ContractError("make_certificate: contraction factor " + std::to_string(cert.gamma) +
                            " is outside [0, 1); P, Q are not a Lyapunov pair for any closed loop");
    }

    // V at the anchor; tiny negative rounding for near-zero states clamps to 0.
    const Matrix v = transpose(xtilde_onset) * gains.p * xtilde_onset;
    cert.v_onset = std::max(v(0, 0), 0.0);
    return cert;
}

TolerabilityVerdict check_tolerable(const Trajectory& traj, const ToleranceSpec& spec) {
    spec.validate();
    if (spec.t > traj.horizon) {
        throw ContractError("check_tolerable: onset T = " + std::to_string(spec.t) +
                            " exceeds the recorded horizon " + std::to_string(traj.horizon));
    }

    TolerabilityVerdict verdict;
    verdict.max_err_after_t = 0.0;
    for (std::size_t i = static_cast<std::size_t>(spec.t); i < traj.steps.size(); ++i) {
        verdict.max_err_after_t = std::max(verdict.max_err_after_t, traj.steps[i].e_norm);
    }

    verdict.certificate =
        make_certificate(traj.gains, traj.plant.c, traj.steps[static_cast<std::size_t>(spec.t)].xtilde,
                         spec.t);
    verdict.tail_bound = verdict.certificate.bound_at(traj.horizon + 1);
    verdict.certified_tail = verdict.tail_bound <= spec.epsilon;
    verdict.tolerable = verdict.max_err_after_t <= spec.epsilon && verdict.certified_tail;
    return verdict;
}

std::optional<int> minimal_tolerance_time(const Trajectory& traj, double epsilon) {
    if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
        throw ContractError("minimal_tolerance_time: epsilon must be positive and finite");
    }

    const std::size_t count = traj.steps.size();
    // Suffix maxima of the recorded error norms: suffix[t] = max_{i >= t} e_i.
    std::vector<double> suffix(count);
    double running = 0.0;
    for (std::size_t i = count; i-- > 0;) {
        running = std::max(running, traj.steps[i].e_norm);
        suffix[i] = running;
    }

    // Spectral data is shared by every candidate onset; only V_T moves.
    const Certificate base = make_certificate(traj.gains, traj.plant.c, traj.steps.front().xtilde, 0);

    for (std::size_t t = 0; t < count; ++t) {
        if (suffix[t] > epsilon) {
            continue;
        }
        Certificate cert = base;
        cert.onset = static_cast<int>(t);
        cert.v_onset = std::max(traj.steps[t].v, 0.0);
        if (cert.bound_at(traj.horizon + 1) <= epsilon) {
            return static_cast<int>(t);
        }
    }
    return std::nullopt;
}

CertifyResult certify_tolerable(const TrackingGains& gains, const Matrix& c, const Matrix& xtilde_t,
                                const ToleranceSpec& spec) {
    spec.validate();
    CertifyResult result;
    result.certificate = make_certificate(gains, c, xtilde_t, spec.t);
    result.certified = result.certificate.bound_at(spec.t) <= spec.epsilon;
    return result;
}

namespace {

struct SearchCandidate {
    double c = 0.0;
    Matrix k;
    TrackingGains gains;
    Trajectory trajectory;
    TolerabilityVerdict verdict;
};

/// Evaluate one scale. A candidate is returned even when the verdict fails
/// (the infeasibility report wants the best attempt); synthesis errors are
/// reported through `skipped` instead.
std::optional<SearchCandidate> evaluate_scale(const PlantModel& plant, const ReferenceModel& reference,
                                              const Disturbance& d, const ToleranceSpec& spec,
                                              const Matrix& base_target, double c, int horizon,
                                              std::vector<SkippedPoint>& skipped) {
    try {
        SearchCandidate cand;
        cand.c = c;
        const Matrix target = c * base_target;
        cand.k = place_gain(plant, target);
        cand.gains = tracking_gains(plant, reference, cand.k, Matrix::identity(plant.n()));
        cand.trajectory = simulate_perturbed(plant, reference, cand.gains, d, horizon);
        cand.verdict = check_tolerable(cand.trajectory, spec);
        return cand;
    } catch (const Error& err) {
        skipped.push_back(SkippedPoint{c, err.what()});
        return std::nullopt;
    }
}

}  // namespace

GainSearchResult synthesize_tolerant_gain(const PlantModel& plant, const ReferenceModel& reference,
                                          const Disturbance& d, const ToleranceSpec& spec,
                                          const Matrix& base_target, const GainSearchSettings& settings) {
    plant.validate();
    reference.validate(plant.p());
    spec.validate();
    if (settings.steps < 2 || !(settings.c_min > 0.0) || settings.c_min >= 1.0) {
        throw ContractError("synthesize_tolerant_gain: need steps >= 2 and 0 < c_min < 1");
    }
    if (!schur_certificate(base_target).stable) {
        throw ContractError("synthesize_tolerant_gain: base target must be Schur stable");
    }
    try {
        (void)inverse(base_target);
    } catch (const SingularMatrixError&) {
        throw ContractError("synthesize_tolerant_gain: base target must be invertible");
    }

    const int horizon = std::max(200, spec.t + 100);

    GainSearchResult result;
    std::optional<SearchCandidate> best_failing;  // smallest max error seen
    std::optional<SearchCandidate> passing;
    double previous_c = 0.0;  // grid point just above the first passing one
    bool have_previous = false;

    for (int j = 0; j < settings.steps; ++j) {
        const double c = 1.0 - static_cast<double>(j) * (1.0 - settings.c_min) /
                                   static_cast<double>(settings.steps - 1);
        auto cand = evaluate_scale(plant, reference, d, spec, base_target, c, horizon, result.skipped);
        if (cand && cand->verdict.tolerable) {
            passing = std::move(cand);
            break;
        }
        if (cand && (!best_failing || cand->verdict.max_err_after_t <
                                          best_failing->verdict.max_err_after_t)) {
            best_failing = std::move(cand);
        }
        previous_c = c;
        have_previous = true;
    }

    if (!passing) {
        if (best_failing) {
            result.c = best_failing->c;
            result.k = std::move(best_failing->k);
            result.gains = std::move(best_failing->gains);
            result.trajectory = std::move(best_failing->trajectory);
            result.best_max_err_after_t = best_failing->verdict.max_err_after_t;
        }
        return result;  // feasible = false
    }

    // Refine toward the largest passing scale: bisect between the passing
    // grid point and its failed (or skipped) neighbor above.
    if (have_previous) {
        double lo = passing->c;
        double hi = previous_c;
        std::vector<SkippedPoint> bisect_skips;  // bisection probes are transient, not reported
        for (int iter = 0; iter < 8; ++iter) {
            const double mid = 0.5 * (lo + hi);
            auto cand =
                evaluate_scale(plant, reference, d, spec, base_target, mid, horizon, bisect_skips);
            if (cand && cand->verdict.tolerable) {
                lo = mid;
                passing = std::move(cand);
            } else {
                hi = mid;
            }
        }
    }

    result.feasible = true;
    result.c = passing->c;
    result.best_max_err_after_t = passing->verdict.max_err_after_t;
    const auto t_star = minimal_tolerance_time(passing->trajectory, spec.epsilon);
    result.t_achieved = t_star.value_or(spec.t);
    result.k = std::move(passing->k);
    result.gains = std::move(passing->gains);
    result.trajectory = std::move(passing->trajectory);
    return result;
}

}  // namespace trackctl
