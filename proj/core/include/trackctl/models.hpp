#pragma once

#include "trackctl/matrix.hpp"

namespace trackctl {

/// Discrete-time plant:  x_{i+1} = A x_i + B u_i,  y_i = C x_i.
struct PlantModel {
    Matrix a;   ///< n x n state matrix
    Matrix b;   ///< n x m input matrix
    Matrix c;   ///< p x n output matrix
    Matrix x0;  ///< n x 1 initial state

    std::size_t n() const { return a.rows(); }
    std::size_t m() const { return b.cols(); }
    std::size_t p() const { return c.rows(); }

    /// Throws ShapeError naming the offending field on any inconsistency.
    void validate() const;
};

/// Autonomous reference model:  x^m_{i+1} = Am x^m_i,  y^m_i = Cm x^m_i.
/// The reference state dimension is unconstrained relative to the plant;
/// only the output dimension must agree.
struct ReferenceModel {
    Matrix am;   ///< n_m x n_m
    Matrix cm;   ///< p x n_m
    Matrix x0m;  ///< n_m x 1

    std::size_t nm() const { return am.rows(); }

    /// plant_p is the plant output dimension the reference must match.
    void validate(std::size_t plant_p) const;
};

}  // namespace trackctl
