#include "sacsim/cgt.hpp"

#include <algorithm>
#include <limits>

namespace sac {

namespace {

Matrix kron(const Matrix& A, const Matrix& B) {
    Matrix K(A.rows() * B.rows(), A.cols() * B.cols());
    for (Eigen::Index i = 0; i < A.rows(); ++i)
        for (Eigen::Index j = 0; j < A.cols(); ++j)
            K.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
    return K;
}

Vector vec(const Matrix& M) {
    return Vector(M.reshaped());
}

Matrix unvec(const Vector& v, Eigen::Index rows, Eigen::Index cols) {
    return Matrix(v.reshaped(rows, cols));
}

void check_dimensions(const StateSpace& plant, const RefModelConfig& ref) {
    if (plant.inputs() != plant.outputs())
        throw std::invalid_argument("cgt: square plant required (m == p)");
    if (ref.output_dim() != plant.outputs())
        throw std::invalid_argument("cgt: reference model output dimension must match plant");
}

// Assembles and solves the linear system in [vec(S11); vec(S12); vec(S21); vec(S22)].
// For the closed-loop equations the quadratic term S11 Lv Cp S11 is linearized
// by freezing its left factor at linearization_point.
IdealGains solve_linear_stage(const StateSpace& plant, const RefModelConfig& ref,
                              const Matrix* linearization_point) {
    const Eigen::Index np = plant.states(), m = plant.outputs();
    const Eigen::Index nm = ref.model_states(), mm = ref.command_dim();

    const Eigen::Index n11 = np * nm, n12 = np * mm, n21 = m * nm, n22 = m * mm;
    const Eigen::Index total = n11 + n12 + n21 + n22;
    const Eigen::Index off11 = 0, off12 = n11, off21 = n11 + n12, off22 = n11 + n12 + n21;

    Matrix M = Matrix::Zero(total, total);
    Vector rhs = Vector::Zero(total);

    const Matrix I_np = Matrix::Identity(np, np);
    const Matrix I_nm = Matrix::Identity(nm, nm);
    const Matrix I_mm = Matrix::Identity(mm, mm);

    // Ap S11 + Bp S21 - S11 Am (+ S11 Lv Cm - S11p Lv Cp S11) = 0
    Matrix block11 = kron(I_nm, plant.A) - kron(Matrix(ref.Am.transpose()), I_np);
    if (linearization_point) {
        const Matrix lv_cm = (*ref.Lv) * ref.Cm;
        const Matrix s11p_lv_cp = (*linearization_point) * (*ref.Lv) * plant.C;
        block11 += kron(Matrix(lv_cm.transpose()), I_np) - kron(I_nm, s11p_lv_cp);
    }
    M.block(0, off11, n11, n11) = block11;
    M.block(0, off21, n11, n21) = kron(I_nm, plant.B);

    // Ap S12 + Bp S22 - S11 Bm (- S11p Lv Cp S12) = 0
    Matrix block12 = kron(I_mm, plant.A);
    if (linearization_point) {
        const Matrix s11p_lv_cp = (*linearization_point) * (*ref.Lv) * plant.C;
        block12 -= kron(I_mm, s11p_lv_cp);
    }
    M.block(n11, off11, n12, n11) = -kron(Matrix(ref.Bm.transpose()), I_np);
    M.block(n11, off12, n12, n12) = block12;
    M.block(n11, off22, n12, n22) = kron(I_mm, plant.B);

    // Cp S11 = Cm
    M.block(n11 + n12, off11, n21, n11) = kron(I_nm, plant.C);
    rhs.segment(n11 + n12, n21) = vec(ref.Cm);

    // Cp S12 = 0
    M.block(n11 + n12 + n21, off12, n22, n12) = kron(I_mm, plant.C);

    Eigen::JacobiSVD<Matrix> svd(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Scalar smax = svd.singularValues()(0);
    const Scalar smin = svd.singularValues()(svd.singularValues().size() - 1);
    const Scalar cond = smin > 0 ? smax / smin : std::numeric_limits<Scalar>::infinity();

    Vector s = svd.solve(rhs);
    if ((M * s - rhs).norm() > 1e-8 * (1.0 + rhs.norm()))
        throw CgtError("CGT solution does not exist (condition number " + std::to_string(cond) +
                           ")",
                       cond);

    return {unvec(s.segment(off11, n11), np, nm), unvec(s.segment(off12, n12), np, mm),
            unvec(s.segment(off21, n21), m, nm), unvec(s.segment(off22, n22), m, mm)};
}

} // namespace

IdealGains solve_cgt_openloop(const StateSpace& plant, const RefModelConfig& ref) {
    check_dimensions(plant, ref);
    IdealGains gains = solve_linear_stage(plant, ref, nullptr);

    RefModelConfig open_loop(ref.Am, ref.Bm, ref.Cm); // residual in the open-loop form
    const Scalar norm = std::max({gains.S11.norm(), gains.S12.norm(), gains.S21.norm(),
                                  gains.S22.norm()});
    const Scalar residual = cgt_residual(plant, open_loop, gains);
    if (residual > 1e-8 * (1.0 + norm))
        throw CgtError("CGT solution does not exist (residual " + std::to_string(residual) + ")",
                       residual);
    return gains;
}

CgtSolution solve_cgt_closedloop(const StateSpace& plant, const RefModelConfig& ref,
                                 const IdealGains& init, Scalar tol, int max_iter) {
    check_dimensions(plant, ref);
    if (!ref.Lv)
        throw std::invalid_argument("solve_cgt_closedloop: closed-loop gain not configured");
    if (ref.Lv->isZero())
        return {init, cgt_residual(plant, ref, init), 0};

    IdealGains current = init;
    Scalar residual = cgt_residual(plant, ref, current);
    if (residual <= tol)
        return {current, residual, 0};

    Scalar best = residual;
    for (int iter = 1; iter <= max_iter; ++iter) {
        current = solve_linear_stage(plant, ref, &current.S11);
        residual = cgt_residual(plant, ref, current);
        if (residual <= tol)
            return {current, residual, iter};
        best = std::min(best, residual);
    }
    throw CgtError("CGT fixed-point iteration did not converge (best residual " +
                       std::to_string(best) + ")",
                   best);
}

Scalar cgt_residual(const StateSpace& plant, const RefModelConfig& ref, const IdealGains& S) {
    check_dimensions(plant, ref);
    Matrix r1 = plant.A * S.S11 + plant.B * S.S21 - S.S11 * ref.Am;
    Matrix r2 = plant.A * S.S12 + plant.B * S.S22 - S.S11 * ref.Bm;
    if (ref.Lv) {
        const Matrix lv = *ref.Lv;
        r1 += S.S11 * lv * ref.Cm - S.S11 * lv * plant.C * S.S11;
        r2 -= S.S11 * lv * plant.C * S.S12;
    }
    const Matrix r3 = plant.C * S.S11 - ref.Cm;
    const Matrix r4 = plant.C * S.S12;
    return std::max({r1.norm(), r2.norm(), r3.norm(), r4.norm()});
}

} // namespace sac
