#include "sacsim/passivity.hpp"

#include <cmath>
#include <stdexcept>

namespace sac {

namespace {

bool is_symmetric_positive_definite(const Matrix& M, Scalar margin) {
    if (M.rows() != M.cols())
        return false;
    if ((M - M.transpose()).norm() > 1e-9 * (1.0 + M.norm()))
        return false;
    Eigen::SelfAdjointEigenSolver<Matrix> solver(Matrix(0.5 * (M + M.transpose())));
    return solver.info() == Eigen::Success && solver.eigenvalues().minCoeff() > margin;
}

} // namespace

WasprCheck check_waspr_sufficient(const StateSpace& plant, Scalar margin) {
    if (plant.inputs() != plant.outputs())
        throw std::invalid_argument("check_waspr_sufficient: square plant required (m == p)");

    WasprCheck result;
    result.cb_spectrum = eigenvalues(Matrix(plant.C * plant.B));

    bool cb_ok = true;
    for (const Complex& lambda : result.cb_spectrum) {
        if (!(lambda.real() > margin))
            cb_ok = false;
    }
    if (!cb_ok)
        result.reasons.push_back("CB spectrum not in open right half plane");

    bool min_phase_ok = false;
    if (plant.inputs() == 1) {
        TransferFunction tf = to_transfer_function(plant);
        if (tf.num.is_zero()) {
            result.reasons.push_back("transfer function is identically zero");
        } else if (is_minimum_phase(tf, margin)) {
            min_phase_ok = true;
        } else {
            result.reasons.push_back("not minimum phase");
        }
    } else {
        result.indeterminate = true;
        result.reasons.push_back(
            "minimum-phase test indeterminate for MIMO (transmission zeros not computed)");
    }

    result.pass = cb_ok && min_phase_ok && !result.indeterminate;
    return result;
}

bool verify_waspr_certificate(const StateSpace& plant, const WasprCertificate& cert, Scalar tol) {
    const Eigen::Index n = plant.states(), m = plant.inputs(), p = plant.outputs();
    if (cert.P.rows() != n || cert.P.cols() != n || cert.Q.rows() != n || cert.Q.cols() != n)
        throw std::invalid_argument("verify_waspr_certificate: P, Q must be n x n");
    if (cert.W.rows() != m || cert.W.cols() != m)
        throw std::invalid_argument("verify_waspr_certificate: W must be m x m");
    if (cert.Ke_tilde.rows() != m || cert.Ke_tilde.cols() != p)
        throw std::invalid_argument("verify_waspr_certificate: Ke_tilde must be m x p");

    if (!is_symmetric_positive_definite(cert.P, kStabilityMargin) ||
        !is_symmetric_positive_definite(cert.Q, kStabilityMargin))
        return false;

    const Matrix A_cl = plant.A - plant.B * cert.Ke_tilde * plant.C;
    const Matrix lyap_residual = cert.P * A_cl + A_cl.transpose() * cert.P + cert.Q;
    const Matrix pb = cert.P * plant.B;
    const Matrix passivity_residual = pb - plant.C.transpose() * cert.W.transpose();

    return lyap_residual.norm() <= tol * cert.Q.norm() &&
           passivity_residual.norm() <= tol * pb.norm();
}

PfcDesign synthesize_pfc(const TransferFunction& stabilizer) {
    if (stabilizer.num.degree() < stabilizer.den.degree())
        throw std::invalid_argument("synthesize_pfc: compensator inverse improper");
    TransferFunction feedforward = reciprocal(stabilizer);
    Realization realization = to_state_space(feedforward);
    return {stabilizer, std::move(feedforward), std::move(realization)};
}

AugmentedPlant augment_plant(const TransferFunction& plant_tf, const TransferFunction& feedforward) {
    TransferFunction F = plant_tf + feedforward;
    const bool min_phase = F.num.is_zero() ? false : is_minimum_phase(F);
    return {F, relative_degree(F), min_phase};
}

std::vector<GainSweepPoint> gain_sweep_stability(const TransferFunction& F,
                                                 const std::vector<Scalar>& gains,
                                                 Scalar margin) {
    std::vector<GainSweepPoint> sweep;
    sweep.reserve(gains.size());
    for (Scalar k : gains) {
        if (!(k > 0))
            throw std::invalid_argument("gain_sweep_stability: gains must be positive");
        Polynomial closed_loop = F.den + k * F.num;
        GainSweepPoint point;
        point.gain = k;
        point.poles = poly_roots(closed_loop);
        point.stable = is_hurwitz(point.poles, margin);
        sweep.push_back(std::move(point));
    }
    return sweep;
}

std::vector<Scalar> log_spaced(Scalar lo, Scalar hi, int count) {
    if (!(lo > 0) || !(hi > lo) || count < 2)
        throw std::invalid_argument("log_spaced: need 0 < lo < hi and count >= 2");
    std::vector<Scalar> grid(static_cast<size_t>(count));
    const Scalar step = (std::log10(hi) - std::log10(lo)) / (count - 1);
    for (int i = 0; i < count; ++i)
        grid[static_cast<size_t>(i)] = std::pow(10.0, std::log10(lo) + step * i);
    return grid;
}

} // namespace sac
