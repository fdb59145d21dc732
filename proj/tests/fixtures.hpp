#pragma once

#include "trackctl/matrix.hpp"
#include "trackctl/models.hpp"
#include "trackctl/simulate.hpp"

namespace trackctl::test {

// ============================================================================
// Worked-example data and frozen reference values.
//
// Two kinds of constants live here and must not be confused:
//   - published_* matrices are the values printed in the published worked
//     examples, rounded to 4 decimals; reproduction tests compare against
//     them at published_tol.
//   - expected_* values were computed independently (straight double
//     arithmetic through the textbook formulas, cross-checked against a
//     separate linear-algebra stack) and are frozen here at full precision.
// ============================================================================

inline PlantModel example_plant() {
    PlantModel plant;
    plant.a = Matrix{{2.0, -3.0}, {0.0, 2.0}};
    plant.b = Matrix{{1.0, -2.0}, {9.0, -1.0}};
    plant.c = Matrix{{0.5, 1.0}};
    plant.x0 = Matrix{{0.0}, {1.0}};
    return plant;
}

/// Three-state reference used by the nominal tracking example.
inline ReferenceModel example_reference_full() {
    ReferenceModel ref;
    ref.am = Matrix{{0.9, 1.0, 1.0}, {0.0, 0.9, 1.0}, {0.0, 0.0, 0.9}};
    ref.cm = Matrix{{1.0, 0.9, 0.9}};
    ref.x0m = Matrix{{0.0}, {1.0}, {0.1}};
    return ref;
}

/// Two-state reference used by the disturbance example.
inline ReferenceModel example_reference_reduced() {
    ReferenceModel ref;
    ref.am = Matrix{{0.9, 1.0}, {0.0, 0.9}};
    ref.cm = Matrix{{1.0, 0.9}};
    ref.x0m = Matrix{{0.0}, {1.0}};
    return ref;
}

inline Matrix target_a() { return Matrix{{-0.9, 0.0}, {0.0, 0.8}}; }
inline Matrix target_b() { return Matrix{{-0.5, 0.0}, {0.0, 0.8}}; }

inline Disturbance example_disturbance() { return Disturbance{2.0, Matrix{{0.3}, {0.5}}}; }

// ---------------------------------------------------------------------------
// Published gain matrices (4-decimal print precision)
// ---------------------------------------------------------------------------

constexpr double published_tol = 5e-4;

inline const Matrix published_k_a{{0.1706, -0.3176}, {1.5353, -1.6588}};
inline const Matrix published_k_b{{0.1471, -0.3176}, {1.3235, -1.6588}};
inline const Matrix published_g_full{{0.1276, 0.1149, 0.1149}, {-0.2509, -0.2258, -0.2258}};
inline const Matrix published_ge_full{{1.2474, 1.1227, 1.1227}, {0.3763, 0.3387, 0.3387}};
inline const Matrix published_h_full{{-0.0262, -0.0527, -0.0789}, {-0.5744, -1.1553, -1.7297}};
inline const Matrix published_g_reduced{{0.1276, 0.1149}, {-0.2509, -0.2258}};
inline const Matrix published_ge_reduced{{1.2474, 1.1227}, {0.3763, 0.3387}};
inline const Matrix published_h_reduced{{-0.0262, -0.0527}, {-0.5744, -1.1553}};

// ---------------------------------------------------------------------------
// Frozen full-precision reference values
// ---------------------------------------------------------------------------

/// Tolerance for quantities produced by one or two direct solves.
constexpr double algebra_tol = 1e-12;
/// Tolerance for quantities routed through a simulation or an eigensolve.
constexpr double pipeline_tol = 1e-9;

// K for the two targets; exact values are [2.9, -5.4; 26.1, -28.2] / 17 and
// [2.5, -5.4; 22.5, -28.2] / 17.
inline const Matrix expected_k_a{{0.17058823529411762, -0.3176470588235294},
                                 {1.5352941176470587, -1.6588235294117648}};
inline const Matrix expected_k_b{{0.14705882352941174, -0.3176470588235294},
                                 {1.3235294117647058, -1.6588235294117648}};

inline const Matrix expected_g_full{{0.1276283618581908, 0.11486552567237171, 0.11486552567237171},
                                    {-0.25085574572127145, -0.2257701711491443, -0.2257701711491443}};
inline const Matrix expected_ge_full{{1.2474327628361863, 1.1226894865525676, 1.1226894865525676},
                                     {0.37628361858190684, 0.33865525672371616, 0.33865525672371616}};
inline const Matrix expected_h_full{{-0.02619876312383148, -0.05268862361570553, -0.07888738673953699},
                                    {-0.5744441248381996, -1.1552709621746013, -1.729715087012801}};

inline const Matrix expected_g_reduced{{0.1276283618581908, 0.11486552567237171},
                                       {-0.25085574572127145, -0.2257701711491443}};
inline const Matrix expected_ge_reduced{{1.2474327628361863, 1.1226894865525676},
                                        {0.37628361858190684, 0.33865525672371616}};
inline const Matrix expected_h_reduced{{-0.02619876312383148, -0.05268862361570553},
                                       {-0.5744441248381996, -1.1552709621746013}};

/// Ge for the reduced reference under target_b's closed loop.
inline const Matrix expected_ge_reduced_b{{1.490566037735849, 1.341509433962264},
                                          {0.2547169811320756, 0.229245283018868}};

// Lyapunov solution for a_cl = diag(-0.9, 0.8), Q = I: diag(1/0.19, 1/0.36).
constexpr double expected_p11 = 1.0 / 0.19;
constexpr double expected_p22 = 1.0 / 0.36;

// Nominal run, full reference, target_a closed loop.
inline const Matrix expected_xtilde0{{-1.2349584352078244}, {0.6274792176039122}};
inline const Matrix expected_u0{{-0.47866535308499936}, {-3.5930177621170727}};
constexpr double expected_e0_nominal = 0.01;
constexpr double expected_v0_nominal = 9.120654579363451;

// Decay certificate anchored at step 0 of the nominal run.
constexpr double expected_gamma = 0.81;
constexpr double expected_bound0_nominal = 2.025905861760004;

// Disturbed run (alpha = 2, beta = (0.3, 0.5)): perturbed start (0.3, 2.5).
constexpr double expected_e0_perturbed = 1.75;

// Disturbed run under target_a gains.
constexpr double expected_e1_perturbed_a = 2.099286063569684;
constexpr double expected_max_err_from_8_a = 0.4494541624549635;
constexpr int expected_tstar_a = 8;        // epsilon = 0.5
// Modal decomposition of the same error signal: e_i = c1 (-0.9)^i + c2 (0.8)^i.
constexpr double modal_c1_a = -0.4113447432762838;
constexpr double modal_c2_a = 2.161344743276284;

// Disturbed run under target_b gains.
constexpr double expected_e1_perturbed_b = 2.0769811320754727;
constexpr double expected_e10_perturbed_b = 0.24331188163849315;
constexpr double expected_e11_perturbed_b = 0.19531061969758756;
constexpr int expected_tstar_b = 11;       // epsilon = 0.2
// Modal coefficients for e_i = c1 (-0.5)^i + c2 (0.8)^i.
constexpr double modal_c1_b = -0.520754716981132;
constexpr double modal_c2_b = 2.270754716981132;

}  // namespace trackctl::test
