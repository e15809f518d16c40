#pragma once

#include "sacsim/types.hpp"

namespace sac {

// Time-invariant adaptation weights. All six Gamma blocks must be symmetric
// positive definite and sigma > 0. leak_all extends the sigma leak from K_Ie
// to K_Ix and K_Iu for robustness experiments; off by default, matching the
// written law.
struct GainWeights {
    Matrix gamma_pe; // m x m
    Matrix gamma_ie; // m x m
    Matrix gamma_px; // n_m x n_m
    Matrix gamma_ix; // n_m x n_m
    Matrix gamma_pu; // m_m x m_m
    Matrix gamma_iu; // m_m x m_m
    Scalar sigma = 1.0;
    bool leak_all = false;

    GainWeights(Matrix pe, Matrix ie, Matrix px, Matrix ix, Matrix pu, Matrix iu, Scalar sigma_,
                bool leak_all_ = false);

    // gamma * I on every block, sized for an (m, n_m, m_m) loop.
    static GainWeights uniform(Scalar gamma, Scalar sigma_, Eigen::Index m, Eigen::Index n_m,
                               Eigen::Index m_m);
};

// Integral gain blocks; state variables integrated by the simulation engine.
struct AdaptiveGains {
    Matrix K_Ie; // m x m
    Matrix K_Ix; // m x n_m
    Matrix K_Iu; // m x m_m

    static AdaptiveGains zero(Eigen::Index m, Eigen::Index n_m, Eigen::Index m_m);
};

// Memoryless parts, recomputed from the current signals every evaluation.
struct ProportionalGains {
    Matrix K_pe;
    Matrix K_px;
    Matrix K_pu;
};

// K_pe = e e' G_pe, K_px = e x_m' G_px, K_pu = e u_m' G_pu.
ProportionalGains proportional_gains(const Vector& e_y, const Vector& x_m, const Vector& u_m,
                                     const GainWeights& w);

struct GainDerivatives {
    Matrix dK_Ie;
    Matrix dK_Ix;
    Matrix dK_Iu;
};

// dK_Ie = e e' G_Ie - sigma K_Ie; dK_Ix = e x_m' G_Ix; dK_Iu = e u_m' G_Iu.
// The sigma leak applies to K_Ie only unless w.leak_all is set.
GainDerivatives integral_gain_derivatives(const Vector& e_y, const Vector& x_m, const Vector& u_m,
                                          const AdaptiveGains& gains, const GainWeights& w);

// u_p = (K_pe + K_Ie) e + (K_px + K_Ix) x_m + (K_pu + K_Iu) u_m.
// For the closed-loop architecture the caller passes e_my and x_mo instead.
Vector control(const Vector& e_y, const Vector& x_m, const Vector& u_m,
               const AdaptiveGains& gains, const GainWeights& w);

} // namespace sac
