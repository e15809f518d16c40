#pragma once

#include <stdexcept>

#include "sacsim/reference_model.hpp"
#include "sacsim/state_space.hpp"

namespace sac {

// Ideal-trajectory matrices for step commands:
//   x_p* = S11 x_m + S12 u_m,   u_p* = S21 x_m + S22 u_m.
struct IdealGains {
    Matrix S11; // n_p x n_m
    Matrix S12; // n_p x m_m
    Matrix S21; // m x n_m
    Matrix S22; // m x m_m
};

class CgtError : public std::runtime_error {
  public:
    CgtError(const std::string& message, Scalar diagnostic)
        : std::runtime_error(message), diagnostic_(diagnostic) {}
    // Condition number for singular systems, best residual for non-convergence.
    Scalar diagnostic() const { return diagnostic_; }

  private:
    Scalar diagnostic_;
};

// Solves the open-loop model-following equations
//   Ap S11 + Bp S21 = S11 Am,  Ap S12 + Bp S22 = S11 Bm,
//   Cp S11 = Cm,               Cp S12 = 0
// as one vectorized linear system. Throws CgtError (with the condition
// number) when no solution exists.
IdealGains solve_cgt_openloop(const StateSpace& plant, const RefModelConfig& ref);

struct CgtSolution {
    IdealGains gains;
    Scalar residual;
    int iterations; // 0 when the seed already satisfied the equations
};

// Closed-loop variant: the first block equation gains the terms
// -S11 Lv Cm + S11 Lv Cp S11 and the second gains S11 Lv Cp S12. The
// quadratic term is relaxed by freezing the left S11 factor at the previous
// iterate, seeded from the open-loop solution. Throws CgtError carrying the
// best residual on non-convergence.
CgtSolution solve_cgt_closedloop(const StateSpace& plant, const RefModelConfig& ref,
                                 const IdealGains& init, Scalar tol = 1e-8, int max_iter = 200);

// Max block-equation residual (Frobenius); closed-loop form when ref.Lv is present.
Scalar cgt_residual(const StateSpace& plant, const RefModelConfig& ref, const IdealGains& S);

} // namespace sac
