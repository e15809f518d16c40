#pragma once

#include <optional>

#include "sacsim/types.hpp"

namespace sac {

// Output-error system matrices for a representative (snapshot) error gain Ke:
//   A_mm = -Cp Bp Ke,   A_mn = A_mm - Cm Lv (A_mm when Lv absent).
struct ErrorSystemMatrices {
    Matrix A_mm;
    Matrix A_mn;
};

ErrorSystemMatrices error_system_matrices(const Matrix& CpBp, const Matrix& Ke, const Matrix& Cm,
                                          const std::optional<Matrix>& Lv);

// S1 = -(A_mm + A_mm') Q^-1 / 2 and S2 likewise from A_mn; lambda_max taken
// on the symmetric parts so the spectra are real. The formulas are reported
// exactly as printed; whether sqrt(lambda_max S2 / lambda_max S1) favors the
// closed-loop architecture is left to the simulation-level comparison.
struct BoundReport {
    Matrix A_mm;
    Matrix A_mn;
    Matrix S1;
    Matrix S2;
    Scalar lambda_max_s1;
    Scalar lambda_max_s2;
    Scalar bound_ratio; // sqrt(lambda_max_s2 / lambda_max_s1); NaN when inapplicable
    bool applicable;    // false when either lambda_max is nonpositive
};

// Throws on indefinite or asymmetric Q.
BoundReport bound_report(const Matrix& A_mm, const Matrix& A_mn, const Matrix& Q);

} // namespace sac
