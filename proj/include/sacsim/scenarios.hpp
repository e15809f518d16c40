#pragma once

#include "sacsim/sim_engine.hpp"

namespace sac {
namespace scenarios {

// 150 mm KH2013A MAV lateral dynamics: states [v, p, r, phi], rudder input,
// roll-angle output.
StateSpace mav_lateral();

// Second-order rudder actuator, poles near -36.11 +/- 32.60i.
StateSpace mav_actuator();

// Lateral dynamics in series with the actuator: 6 states
// [v, p, r, phi, delta_r, delta_r_dot], input delta_command, output phi.
StateSpace build_augmented_plant();

// Stabilizing compensator C(s) = (4s + 40)/10 and its parallel feedforward
// D(s) = 1/C(s).
TransferFunction pfc_stabilizer();
PfcDesign default_pfc();

// First-order reference model x_m' = -5 x_m + 5 phi_cmd, y_m = x_m.
RefModelConfig mav_reference(std::optional<Scalar> lv);

struct DefaultScenarios {
    Scenario sac;                   // open-loop reference model
    Scenario clsac;                 // Lv = 20
    std::vector<Scenario> lv_sweep; // Lv = 10, 50, 100
};

// Fully populated roll-attitude tracking scenarios: all adaptation weights 10,
// sigma = 5, square-wave command 0.1745 rad / 20 s period, dt = 1 ms, 40 s.
DefaultScenarios default_scenarios();

} // namespace scenarios
} // namespace sac
