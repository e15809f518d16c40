#include "sacsim/reference_model.hpp"

#include <cmath>
#include <stdexcept>

namespace sac {

RefModelConfig::RefModelConfig(Matrix Am_, Matrix Bm_, Matrix Cm_, std::optional<Matrix> Lv_)
    : Am(std::move(Am_)), Bm(std::move(Bm_)), Cm(std::move(Cm_)), Lv(std::move(Lv_)) {
    if (Am.rows() != Am.cols())
        throw std::invalid_argument("RefModelConfig: Am must be square");
    if (Bm.rows() != Am.rows())
        throw std::invalid_argument("RefModelConfig: Bm must have as many rows as Am");
    if (Cm.cols() != Am.rows())
        throw std::invalid_argument("RefModelConfig: Cm must have as many columns as Am");
    if (Lv && (Lv->rows() != Am.rows() || Lv->cols() != Cm.rows()))
        throw std::invalid_argument("RefModelConfig: Lv must be n_m x m");
    if (!is_hurwitz(Am))
        throw std::invalid_argument("RefModelConfig: Am must be Hurwitz");
}

Vector ol_derivative(const RefModelConfig& cfg, const Vector& x_m, const Vector& u_m) {
    if (x_m.size() != cfg.model_states() || u_m.size() != cfg.command_dim())
        throw std::invalid_argument("ol_derivative: dimension mismatch");
    return cfg.Am * x_m + cfg.Bm * u_m;
}

Vector cl_derivative(const RefModelConfig& cfg, const Vector& x_mo, const Vector& u_m,
                     const Vector& y_p) {
    if (!cfg.Lv)
        throw std::invalid_argument("cl_derivative: closed-loop gain not configured");
    if (x_mo.size() != cfg.model_states() || u_m.size() != cfg.command_dim() ||
        y_p.size() != cfg.output_dim())
        throw std::invalid_argument("cl_derivative: dimension mismatch");
    return cfg.Am * x_mo + cfg.Bm * u_m - (*cfg.Lv) * (cfg.Cm * x_mo - y_p);
}

Scalar lv_deviation_bound(Scalar lv_norm, Scalar am_norm, Scalar v0, Scalar lambda_min_p1) {
    if (lv_norm < 0)
        throw std::invalid_argument("lv_deviation_bound: ||Lv|| must be nonnegative");
    if (!(am_norm > 0))
        throw std::invalid_argument("lv_deviation_bound: ||Am|| must be positive");
    if (v0 < 0)
        throw std::invalid_argument("lv_deviation_bound: V0 must be nonnegative");
    if (!(lambda_min_p1 > 0))
        throw std::invalid_argument("lv_deviation_bound: lambda_min(P1) must be positive");
    return lv_norm * std::sqrt(1.0 / (2.0 * am_norm)) * std::sqrt(v0 / lambda_min_p1);
}

} // namespace sac
