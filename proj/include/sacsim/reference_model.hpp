#pragma once

#include <optional>

#include "sacsim/state_space.hpp"

namespace sac {

// Reference model x_m' = Am x_m + Bm u_m, y_m = Cm x_m, optionally closed
// through the plant output: x_mo' = Am x_mo + Bm u_m - Lv (Cm x_mo - y_p).
// Am must be Hurwitz; rejected at construction rather than at run time.
struct RefModelConfig {
    Matrix Am; // n_m x n_m
    Matrix Bm; // n_m x m_m
    Matrix Cm; // m x n_m
    std::optional<Matrix> Lv; // n_m x m; absent = open loop only

    RefModelConfig(Matrix Am_, Matrix Bm_, Matrix Cm_, std::optional<Matrix> Lv_ = {});

    bool closed_loop() const { return Lv.has_value(); }
    Eigen::Index model_states() const { return Am.rows(); }
    Eigen::Index command_dim() const { return Bm.cols(); }
    Eigen::Index output_dim() const { return Cm.rows(); }
};

Vector ol_derivative(const RefModelConfig& cfg, const Vector& x_m, const Vector& u_m);

// Throws "closed-loop gain not configured" when Lv is absent.
Vector cl_derivative(const RefModelConfig& cfg, const Vector& x_mo, const Vector& u_m,
                     const Vector& y_p);

// Upper bound on the deviation of the closed-loop model trajectory from the
// open-loop one: ||Lv|| sqrt(1/(2 ||Am||)) sqrt(V0 / lambda_min(P1)).
Scalar lv_deviation_bound(Scalar lv_norm, Scalar am_norm, Scalar v0, Scalar lambda_min_p1);

} // namespace sac
