#pragma once

#include <cstdint>
#include <random>
#include <string>

#include "trackctl/errors.hpp"
#include "trackctl/matrix.hpp"
#include "trackctl/models.hpp"
#include "trackctl/synthesis.hpp"

namespace trackctl::test {

// ============================================================================
// Deterministic random model generators for the property suites. Everything
// is seeded explicitly so a failing draw can be replayed.
// ============================================================================

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform(double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(engine_);
    }

    int uniform_int(int lo, int hi) {
        return std::uniform_int_distribution<int>(lo, hi)(engine_);
    }

    bool flip() { return uniform_int(0, 1) == 1; }

private:
    std::mt19937_64 engine_;
};

inline Matrix random_matrix(Rng& rng, std::size_t rows, std::size_t cols, double lo = -1.0,
                            double hi = 1.0) {
    Matrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) {
            m(i, j) = rng.uniform(lo, hi);
        }
    }
    return m;
}

/// Random symmetric positive definite matrix M^T M + ridge * I.
inline Matrix random_spd(Rng& rng, std::size_t n, double ridge = 0.1) {
    const Matrix m = random_matrix(rng, n, n);
    return transpose(m) * m + ridge * Matrix::identity(n);
}

/// Random invertible matrix, built as a bounded perturbation of the identity
/// and verified by an actual solve. The retry loop is bounded so a generator
/// bug fails the suite instead of hanging it.
inline Matrix random_invertible(Rng& rng, std::size_t n) {
    for (int attempt = 0; attempt < 100; ++attempt) {
        const Matrix v = Matrix::identity(n) + 0.4 * random_matrix(rng, n, n);
        try {
            (void)inverse(v);
            return v;
        } catch (const SingularMatrixError&) {
        } catch (const NumericError&) {
        }
    }
    throw ContractError("random_invertible: exhausted attempts");
}

/// Random diagonalizable matrix V D V^{-1} whose eigenvalues are real with
/// magnitude in [rho_min, rho_max], so the spectral radius is known by
/// construction. rho_max < 1 yields a Schur stable matrix; rho_min > 0 an
/// invertible one.
inline Matrix random_stable(Rng& rng, std::size_t n, double rho_max, double rho_min = 0.0) {
    const Matrix v = random_invertible(rng, n);
    Matrix d(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        const double magnitude = rng.uniform(rho_min, rho_max);
        d(i, i) = rng.flip() ? magnitude : -magnitude;
    }
    return v * d * inverse(v);
}

struct SynthesisInstance {
    PlantModel plant;
    ReferenceModel reference;
    Matrix target;  ///< requested closed loop, Schur stable and invertible
    Matrix k;       ///< place_gain result for target
};

/// Random plant/reference pair on which the whole gain construction goes
/// through: B has full row rank (m >= n), the target closed loop is stable
/// and invertible, and the output maps are full row rank with probability
/// one. Draws that still land on a degenerate configuration are discarded.
inline SynthesisInstance random_feasible_instance(Rng& rng, std::size_t n_max = 4) {
    for (int attempt = 0; attempt < 200; ++attempt) {
        SynthesisInstance inst;
        const std::size_t n = static_cast<std::size_t>(rng.uniform_int(1, static_cast<int>(n_max)));
        const std::size_t m = n + static_cast<std::size_t>(rng.uniform_int(0, 1));
        const std::size_t p = static_cast<std::size_t>(rng.uniform_int(1, static_cast<int>(std::min<std::size_t>(n, 2))));
        const std::size_t nm = static_cast<std::size_t>(rng.uniform_int(1, 3));

        inst.plant.a = random_matrix(rng, n, n);
        inst.plant.b = random_matrix(rng, n, m);
        inst.plant.c = random_matrix(rng, p, n);
        inst.plant.x0 = random_matrix(rng, n, 1);
        inst.reference.am = random_stable(rng, nm, 0.9);
        inst.reference.cm = random_matrix(rng, p, nm);
        inst.reference.x0m = random_matrix(rng, nm, 1);
        inst.target = random_stable(rng, n, 0.9, 0.15);

        try {
            inst.k = place_gain(inst.plant, inst.target);
            (void)tracking_gains(inst.plant, inst.reference, inst.k, Matrix::identity(n));
            return inst;
        } catch (const Error&) {
            // degenerate draw (singular B B^T, rank-deficient R, ...): redraw
        }
    }
    throw ContractError("random_feasible_instance: exhausted attempts");
}

}  // namespace trackctl::test
