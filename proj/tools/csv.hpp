#pragma once

#include <ostream>

#include "trackctl/simulate.hpp"
#include "trackctl/tolerance.hpp"

namespace trackctl::cli {

/// Write a trajectory as CSV:
///
///   i, x_0..x_{n-1}, xm_0..xm_{nm-1}, xt_0..xt_{n-1}, u_0..u_{m-1},
///   y_0..y_{p-1}, ym_0..ym_{p-1}, e_norm, V, dV, cert_bound
///
/// Numbers carry 17 significant digits so parsing them reproduces the
/// in-memory doubles bit-exactly. dV is empty at i = 0; cert_bound is empty
/// before the certificate's anchor step or when no certificate is supplied.
void emit_csv(const Trajectory& traj, std::ostream& out, const Certificate* cert = nullptr);

}  // namespace trackctl::cli
