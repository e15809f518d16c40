#include "sacsim/bounds.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace sac {

namespace {

Scalar lambda_max_symmetric_part(const Matrix& S) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(Matrix(0.5 * (S + S.transpose())));
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("bound_report: eigensolver failed");
    return solver.eigenvalues().maxCoeff();
}

} // namespace

ErrorSystemMatrices error_system_matrices(const Matrix& CpBp, const Matrix& Ke, const Matrix& Cm,
                                          const std::optional<Matrix>& Lv) {
    if (CpBp.rows() != CpBp.cols())
        throw std::invalid_argument("error_system_matrices: CpBp must be square");
    if (Ke.rows() != CpBp.cols() || Ke.cols() != CpBp.rows())
        throw std::invalid_argument("error_system_matrices: Ke dimension mismatch");

    ErrorSystemMatrices out;
    out.A_mm = -CpBp * Ke;
    out.A_mn = out.A_mm;
    if (Lv) {
        if (Cm.cols() != Lv->rows() || Cm.rows() != out.A_mm.rows() ||
            Lv->cols() != out.A_mm.cols())
            throw std::invalid_argument("error_system_matrices: Cm Lv dimension mismatch");
        out.A_mn -= Cm * (*Lv);
    }
    return out;
}

BoundReport bound_report(const Matrix& A_mm, const Matrix& A_mn, const Matrix& Q) {
    if (Q.rows() != Q.cols() || Q.rows() != A_mm.rows())
        throw std::invalid_argument("bound_report: Q dimension mismatch");
    if ((Q - Q.transpose()).norm() > 1e-9 * (1.0 + Q.norm()))
        throw std::invalid_argument("bound_report: Q must be symmetric");
    Eigen::SelfAdjointEigenSolver<Matrix> q_eig(Matrix(0.5 * (Q + Q.transpose())));
    if (q_eig.info() != Eigen::Success || !(q_eig.eigenvalues().minCoeff() > 0))
        throw std::invalid_argument("bound_report: Q must be positive definite");

    const Matrix Q_inv = Q.llt().solve(Matrix::Identity(Q.rows(), Q.cols()));

    BoundReport report;
    report.A_mm = A_mm;
    report.A_mn = A_mn;
    report.S1 = -0.5 * (A_mm + A_mm.transpose()) * Q_inv;
    report.S2 = -0.5 * (A_mn + A_mn.transpose()) * Q_inv;
    report.lambda_max_s1 = lambda_max_symmetric_part(report.S1);
    report.lambda_max_s2 = lambda_max_symmetric_part(report.S2);
    report.applicable = report.lambda_max_s1 > 0 && report.lambda_max_s2 > 0;
    report.bound_ratio = report.applicable
                             ? std::sqrt(report.lambda_max_s2 / report.lambda_max_s1)
                             : std::numeric_limits<Scalar>::quiet_NaN();
    return report;
}

} // namespace sac
