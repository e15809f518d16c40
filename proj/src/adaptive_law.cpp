#include "sacsim/adaptive_law.hpp"

#include <stdexcept>

namespace sac {

namespace {

void require_positive_definite(const Matrix& g, const char* name) {
    if (g.rows() != g.cols())
        throw std::invalid_argument(std::string("GainWeights: ") + name + " must be square");
    if ((g - g.transpose()).norm() > 1e-9 * (1.0 + g.norm()))
        throw std::invalid_argument(std::string("GainWeights: ") + name + " must be symmetric");
    Eigen::SelfAdjointEigenSolver<Matrix> solver(Matrix(0.5 * (g + g.transpose())));
    if (solver.info() != Eigen::Success || !(solver.eigenvalues().minCoeff() > 0))
        throw std::invalid_argument(std::string("GainWeights: ") + name +
                                    " must be positive definite");
}

} // namespace

GainWeights::GainWeights(Matrix pe, Matrix ie, Matrix px, Matrix ix, Matrix pu, Matrix iu,
                         Scalar sigma_, bool leak_all_)
    : gamma_pe(std::move(pe)), gamma_ie(std::move(ie)), gamma_px(std::move(px)),
      gamma_ix(std::move(ix)), gamma_pu(std::move(pu)), gamma_iu(std::move(iu)), sigma(sigma_),
      leak_all(leak_all_) {
    require_positive_definite(gamma_pe, "gamma_pe");
    require_positive_definite(gamma_ie, "gamma_ie");
    require_positive_definite(gamma_px, "gamma_px");
    require_positive_definite(gamma_ix, "gamma_ix");
    require_positive_definite(gamma_pu, "gamma_pu");
    require_positive_definite(gamma_iu, "gamma_iu");
    if (!(sigma > 0))
        throw std::invalid_argument("GainWeights: sigma must be positive");
}

GainWeights GainWeights::uniform(Scalar gamma, Scalar sigma_, Eigen::Index m, Eigen::Index n_m,
                                 Eigen::Index m_m) {
    auto scaled = [gamma](Eigen::Index n) { return Matrix(gamma * Matrix::Identity(n, n)); };
    return {scaled(m), scaled(m), scaled(n_m), scaled(n_m), scaled(m_m), scaled(m_m), sigma_};
}

AdaptiveGains AdaptiveGains::zero(Eigen::Index m, Eigen::Index n_m, Eigen::Index m_m) {
    return {Matrix::Zero(m, m), Matrix::Zero(m, n_m), Matrix::Zero(m, m_m)};
}

ProportionalGains proportional_gains(const Vector& e_y, const Vector& x_m, const Vector& u_m,
                                     const GainWeights& w) {
    return {e_y * e_y.transpose() * w.gamma_pe,
            e_y * x_m.transpose() * w.gamma_px,
            e_y * u_m.transpose() * w.gamma_pu};
}

GainDerivatives integral_gain_derivatives(const Vector& e_y, const Vector& x_m, const Vector& u_m,
                                          const AdaptiveGains& gains, const GainWeights& w) {
    GainDerivatives d;
    d.dK_Ie = e_y * e_y.transpose() * w.gamma_ie - w.sigma * gains.K_Ie;
    d.dK_Ix = e_y * x_m.transpose() * w.gamma_ix;
    d.dK_Iu = e_y * u_m.transpose() * w.gamma_iu;
    if (w.leak_all) {
        d.dK_Ix -= w.sigma * gains.K_Ix;
        d.dK_Iu -= w.sigma * gains.K_Iu;
    }
    return d;
}

Vector control(const Vector& e_y, const Vector& x_m, const Vector& u_m,
               const AdaptiveGains& gains, const GainWeights& w) {
    ProportionalGains p = proportional_gains(e_y, x_m, u_m, w);
    return (p.K_pe + gains.K_Ie) * e_y + (p.K_px + gains.K_Ix) * x_m +
           (p.K_pu + gains.K_Iu) * u_m;
}

} // namespace sac
