#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sacsim/state_space.hpp"

namespace sac {

// Candidate solution of the passivity conditions
//   P (A - B Ke C) + (A - B Ke C)' P = -Q,   P B = C' W'
// with P, Q symmetric positive definite. Only verified here, never searched
// for: the sufficient condition (minimum phase + CB spectrum) is what the
// synthesis path uses.
struct WasprCertificate {
    Matrix P;
    Matrix Q;
    Matrix W;
    Matrix Ke_tilde;
};

struct WasprCheck {
    bool pass = false;
    bool indeterminate = false; // MIMO minimum-phase test not available
    std::vector<std::string> reasons;
    ComplexVector cb_spectrum;
};

// Sufficient condition: minimum phase and every eigenvalue of C*B in the
// open right half plane. Throws on non-square (m != p) plants.
WasprCheck check_waspr_sufficient(const StateSpace& plant, Scalar margin = kStabilityMargin);

bool verify_waspr_certificate(const StateSpace& plant, const WasprCertificate& cert, Scalar tol);

// Parallel feedforward design: D(s) = 1/C(s) realized with an explicit
// feedthrough scalar so the simulator can form y_aug = y_p + C_D x_D + d0 u_p.
struct PfcDesign {
    TransferFunction stabilizer;  // C(s)
    TransferFunction feedforward; // D(s) = 1/C(s)
    Realization realization;      // strictly proper part of D(s) + feedthrough
};

// Throws "compensator inverse improper" when deg num < deg den.
PfcDesign synthesize_pfc(const TransferFunction& stabilizer);

struct AugmentedPlant {
    TransferFunction tf; // F = T + D, unreduced
    int relative_degree;
    bool minimum_phase;
};

AugmentedPlant augment_plant(const TransferFunction& plant_tf, const TransferFunction& feedforward);

struct GainSweepPoint {
    Scalar gain;
    ComplexVector poles; // roots of den + k num
    bool stable;
};

// Numeric substitute for a root locus: closed-loop poles of F under positive
// output feedback k, for each listed gain.
std::vector<GainSweepPoint> gain_sweep_stability(const TransferFunction& F,
                                                 const std::vector<Scalar>& gains,
                                                 Scalar margin = kStabilityMargin);

std::vector<Scalar> log_spaced(Scalar lo, Scalar hi, int count);

} // namespace sac
