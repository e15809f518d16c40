#pragma once

#include "sacsim/transfer_function.hpp"
#include "sacsim/types.hpp"

namespace sac {

// LTI state-space triple (A, B, C). Dimensions are validated at construction;
// zero-state systems (pure gains realized elsewhere as feedthrough) are allowed.
struct StateSpace {
    Matrix A; // n x n
    Matrix B; // n x m
    Matrix C; // p x n

    StateSpace(Matrix A_, Matrix B_, Matrix C_);

    Eigen::Index states() const { return A.rows(); }
    Eigen::Index inputs() const { return B.cols(); }
    Eigen::Index outputs() const { return C.rows(); }
};

// Full spectrum with multiplicity. Throws on non-square input.
ComplexVector eigenvalues(const Matrix& M);

bool is_hurwitz(const Matrix& A, Scalar margin = kStabilityMargin);

// Characteristic polynomial of A by the Faddeev-LeVerrier recursion (monic, descending).
Polynomial characteristic_polynomial(const Matrix& A);

// C (sI - A)^-1 B for SISO systems; denominator is the characteristic
// polynomial of A. Throws "SISO required" on MIMO input.
TransferFunction to_transfer_function(const StateSpace& sys);

// State-space realization plus the direct feedthrough split off a biproper
// transfer function (zero for strictly proper inputs).
struct Realization {
    StateSpace ss;
    Scalar feedthrough;
};

// Controllable canonical realization. Biproper inputs are split into
// feedthrough + strictly proper part; improper inputs throw.
Realization to_state_space(const TransferFunction& tf);

// Series interconnection u -> inner -> outer -> y, states ordered [x_outer; x_inner].
StateSpace series(const StateSpace& inner, const StateSpace& outer);

// Parallel interconnection: shared input, summed output, states [x_a; x_b].
StateSpace parallel(const StateSpace& a, const StateSpace& b);

} // namespace sac
