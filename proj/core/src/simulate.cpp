#include "trackctl/simulate.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "trackctl/errors.hpp"

namespace trackctl {

namespace {

void validate_gain_shapes(const PlantModel& plant, const ReferenceModel& reference,
                          const TrackingGains& gains) {
    const std::size_t n = plant.n();
    const std::size_t m = plant.m();
    const std::size_t nm = reference.nm();
    if (gains.k.rows() != m || gains.k.cols() != n) {
        throw ShapeError("simulate: gains.K must be " + std::to_string(m) + "x" + std::to_string(n));
    }
    if (gains.ge.rows() != n || gains.ge.cols() != nm) {
        throw ShapeError("simulate: gains.Ge must be " + std::to_string(n) + "x" + std::to_string(nm));
    }
    if (gains.g.rows() != n || gains.g.cols() != nm || gains.h.rows() != m || gains.h.cols() != nm) {
        throw ShapeError("simulate: gains.G / gains.H shapes do not match the models");
    }
    if (gains.p.rows() != n || gains.p.cols() != n || gains.q.rows() != n || gains.q.cols() != n) {
        throw ShapeError("simulate: gains must carry the n x n Lyapunov pair P, Q");
    }
    if (gains.a_cl.rows() != n || gains.a_cl.cols() != n) {
        throw ShapeError("simulate: gains.a_cl must be " + std::to_string(n) + "x" + std::to_string(n));
    }
}

double quadratic_form(const Matrix& p, const Matrix& x) {
    double v = 0.0;
    for (std::size_t i = 0; i < p.rows(); ++i) {
        for (std::size_t j = 0; j < p.cols(); ++j) {
            v += x(i, 0) * p(i, j) * x(j, 0);
        }
    }
    return v;
}

Trajectory run(const PlantModel& plant, const ReferenceModel& reference, const TrackingGains& gains,
               Matrix x_start, int horizon, std::optional<Disturbance> disturbance) {
    plant.validate();
    reference.validate(plant.p());
    validate_gain_shapes(plant, reference, gains);
    if (horizon < 1) {
        throw ContractError("simulate: horizon must be at least 1, got " + std::to_string(horizon));
    }

    const Matrix feedforward = gains.h - gains.k * gains.g;  // applied to xm each step

    Trajectory traj;
    traj.horizon = horizon;
    traj.plant = plant;
    traj.reference = reference;
    traj.gains = gains;
    traj.disturbance = std::move(disturbance);
    traj.steps.reserve(static_cast<std::size_t>(horizon) + 1);

    Matrix x = std::move(x_start);
    Matrix xm = reference.x0m;
    double v_prev = 0.0;

    for (int i = 0; i <= horizon; ++i) {
        StepRecord rec;
        rec.i = i;
        rec.x = x;
        rec.xm = xm;
        rec.y = plant.c * x;
        rec.ym = reference.cm * xm;
        rec.e = rec.y - rec.ym;
        rec.e_norm = frobenius_norm(rec.e);
        rec.xtilde = x - gains.ge * xm;
        rec.v = quadratic_form(gains.p, rec.xtilde);
        if (i > 0) {
            rec.dv = rec.v - v_prev;
        }
        v_prev = rec.v;
        rec.u = control_input(gains, x, xm);

        if (!rec.x.all_finite() || !rec.u.all_finite() || !std::isfinite(rec.v)) {
            throw NumericError("simulate: non-finite value at step " + std::to_string(i) +
                               "; the configuration is numerically unstable");
        }
        traj.steps.push_back(std::move(rec));

        if (i < horizon) {
            x = plant.a * x + plant.b * traj.steps.back().u;
            xm = reference.am * xm;
        }
    }
    return traj;
}

}  // namespace

Matrix control_input(const TrackingGains& gains, const Matrix& x, const Matrix& xm) {
    if (x.cols() != 1 || xm.cols() != 1 || x.rows() != gains.k.cols() || xm.rows() != gains.g.cols()) {
        throw ShapeError("control_input: x must be " + std::to_string(gains.k.cols()) + "x1 and xm " +
                         std::to_string(gains.g.cols()) + "x1");
    }
    return gains.k * x + (gains.h - gains.k * gains.g) * xm;
}

Trajectory simulate(const PlantModel& plant, const ReferenceModel& reference, const TrackingGains& gains,
                    int horizon) {
    return run(plant, reference, gains, plant.x0, horizon, std::nullopt);
}

Trajectory simulate_perturbed(const PlantModel& plant, const ReferenceModel& reference,
                              const TrackingGains& gains, const Disturbance& d, int horizon) {
    plant.validate();
    if (d.beta.rows() != plant.n() || d.beta.cols() != 1) {
        throw ShapeError("simulate_perturbed: beta must be " + std::to_string(plant.n()) + "x1, got " +
                         std::to_string(d.beta.rows()) + "x" + std::to_string(d.beta.cols()));
    }
    if (!std::isfinite(d.alpha) || !d.beta.all_finite()) {
        throw NumericError("simulate_perturbed: disturbance has non-finite entries");
    }
    return run(plant, reference, gains, d.alpha * plant.x0 + d.beta, horizon, d);
}

ConvergenceReport verify_convergence(const Trajectory& traj) {
    if (traj.steps.empty()) {
        throw ContractError("verify_convergence: trajectory has no recorded steps");
    }

    ConvergenceReport report;
    const double xt0 = frobenius_norm(traj.steps.front().xtilde);
    report.tolerance = 1e-9 * (1.0 + xt0 * xt0);
    report.v_nonincreasing = true;

    const Matrix& a_cl = traj.gains.a_cl;
    const Matrix& q = traj.gains.q;
    const Matrix& c = traj.plant.c;

    for (std::size_t i = 0; i < traj.steps.size(); ++i) {
        const StepRecord& rec = traj.steps[i];

        const double r3 = frobenius_norm(rec.e - c * rec.xtilde);
        report.output_residual = std::max(report.output_residual, r3);

        if (i + 1 < traj.steps.size()) {
            const StepRecord& next = traj.steps[i + 1];
            const double r1 = frobenius_norm(next.xtilde - a_cl * rec.xtilde);
            report.recursion_residual = std::max(report.recursion_residual, r1);

            const double decrement = quadratic_form(q, rec.xtilde);
            const double r2 = std::abs(next.dv.value_or(0.0) + decrement);
            report.increment_residual = std::max(report.increment_residual, r2);

            if (next.v > rec.v) {
                report.v_nonincreasing = false;
            }
        }
    }
    return report;
}

}  // namespace trackctl
