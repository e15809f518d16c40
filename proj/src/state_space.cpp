#include "sacsim/state_space.hpp"

#include <stdexcept>

namespace sac {

StateSpace::StateSpace(Matrix A_, Matrix B_, Matrix C_)
    : A(std::move(A_)), B(std::move(B_)), C(std::move(C_)) {
    if (A.rows() != A.cols())
        throw std::invalid_argument("StateSpace: A must be square");
    if (B.rows() != A.rows())
        throw std::invalid_argument("StateSpace: B must have as many rows as A");
    if (C.cols() != A.rows())
        throw std::invalid_argument("StateSpace: C must have as many columns as A");
}

ComplexVector eigenvalues(const Matrix& M) {
    if (M.rows() != M.cols())
        throw std::invalid_argument("eigenvalues: matrix must be square");
    if (M.rows() == 0)
        return {};
    Eigen::EigenSolver<Matrix> solver(M, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("eigenvalues: eigensolver failed to converge");
    ComplexVector spectrum(static_cast<size_t>(M.rows()));
    for (Eigen::Index i = 0; i < M.rows(); ++i)
        spectrum[static_cast<size_t>(i)] = solver.eigenvalues()[i];
    return spectrum;
}

bool is_hurwitz(const Matrix& A, Scalar margin) {
    return is_hurwitz(eigenvalues(A), margin);
}

Polynomial characteristic_polynomial(const Matrix& A) {
    if (A.rows() != A.cols())
        throw std::invalid_argument("characteristic_polynomial: matrix must be square");
    const Eigen::Index n = A.rows();
    Vector c(n + 1);
    c[0] = 1.0;
    Matrix N = Matrix::Identity(n, n);
    for (Eigen::Index k = 1; k <= n; ++k) {
        Matrix AN = A * N;
        c[k] = -AN.trace() / static_cast<Scalar>(k);
        N = AN + c[k] * Matrix::Identity(n, n);
    }
    return Polynomial(c);
}

TransferFunction to_transfer_function(const StateSpace& sys) {
    if (sys.inputs() != 1 || sys.outputs() != 1)
        throw std::invalid_argument("to_transfer_function: SISO required");
    const Eigen::Index n = sys.states();
    if (n == 0)
        return {Polynomial{}, Polynomial{1.0}};

    // Faddeev-LeVerrier: adj(sI - A) = sum_k s^(n-1-k) N_k with
    // N_0 = I, N_k = A N_(k-1) + c_k I, so num coefficient of s^(n-1-k) is C N_k B.
    Vector den(n + 1), num(n);
    den[0] = 1.0;
    Matrix N = Matrix::Identity(n, n);
    for (Eigen::Index k = 1; k <= n; ++k) {
        num[k - 1] = (sys.C * N * sys.B)(0, 0);
        Matrix AN = sys.A * N;
        den[k] = -AN.trace() / static_cast<Scalar>(k);
        N = AN + den[k] * Matrix::Identity(n, n);
    }
    // Structural leading zeros of the numerator survive exactly; trim the
    // float residue of near-cancellations as well.
    return {trim(Polynomial(num), 1e-12), Polynomial(den)};
}

Realization to_state_space(const TransferFunction& tf) {
    if (relative_degree(tf) < 0)
        throw std::invalid_argument("to_state_space: improper transfer function");

    const Scalar den_lead = tf.den.leading();
    Polynomial den = Polynomial(Vector(tf.den.coeffs() / den_lead)); // monic
    Polynomial num = Polynomial(Vector(tf.num.coeffs() / den_lead));

    Scalar d0 = 0;
    if (!num.is_zero() && num.degree() == den.degree()) {
        d0 = num.leading();
        num = num - d0 * den; // strictly proper remainder
    }

    const Eigen::Index n = den.degree();
    Matrix A = Matrix::Zero(n, n);
    for (Eigen::Index i = 0; i + 1 < n; ++i)
        A(i, i + 1) = 1.0;
    for (Eigen::Index j = 0; j < n; ++j)
        A(n - 1, j) = -den.coeffs()[n - j]; // ascending state order

    Matrix B = Matrix::Zero(n, 1);
    if (n > 0)
        B(n - 1, 0) = 1.0;

    Matrix C = Matrix::Zero(1, n);
    if (!num.is_zero()) {
        const Eigen::Index dn = num.degree();
        for (Eigen::Index j = 0; j <= dn; ++j)
            C(0, dn - j) = num.coeffs()[j];
    }
    return {StateSpace(std::move(A), std::move(B), std::move(C)), d0};
}

StateSpace series(const StateSpace& inner, const StateSpace& outer) {
    if (inner.outputs() != outer.inputs())
        throw std::invalid_argument("series: inner outputs must match outer inputs");
    const Eigen::Index no = outer.states(), ni = inner.states();
    Matrix A = Matrix::Zero(no + ni, no + ni);
    A.topLeftCorner(no, no) = outer.A;
    A.topRightCorner(no, ni) = outer.B * inner.C;
    A.bottomRightCorner(ni, ni) = inner.A;

    Matrix B = Matrix::Zero(no + ni, inner.inputs());
    B.bottomRows(ni) = inner.B;

    Matrix C = Matrix::Zero(outer.outputs(), no + ni);
    C.leftCols(no) = outer.C;
    return {std::move(A), std::move(B), std::move(C)};
}

StateSpace parallel(const StateSpace& a, const StateSpace& b) {
    if (a.inputs() != b.inputs() || a.outputs() != b.outputs())
        throw std::invalid_argument("parallel: input/output dimensions must match");
    const Eigen::Index na = a.states(), nb = b.states();
    Matrix A = Matrix::Zero(na + nb, na + nb);
    A.topLeftCorner(na, na) = a.A;
    A.bottomRightCorner(nb, nb) = b.A;

    Matrix B(na + nb, a.inputs());
    B.topRows(na) = a.B;
    B.bottomRows(nb) = b.B;

    Matrix C(a.outputs(), na + nb);
    C.leftCols(na) = a.C;
    C.rightCols(nb) = b.C;
    return {std::move(A), std::move(B), std::move(C)};
}

} // namespace sac
