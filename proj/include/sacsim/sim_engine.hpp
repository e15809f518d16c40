#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "sacsim/adaptive_law.hpp"
#include "sacsim/passivity.hpp"
#include "sacsim/reference_model.hpp"
#include "sacsim/state_space.hpp"

namespace sac {

enum class CommandKind { Step, Square, Constant };

struct CommandSpec {
    CommandKind kind = CommandKind::Step;
    Scalar amplitude = 0.0;
    Scalar period = 0.0; // square only
    Scalar offset = 0.0; // square only
};

// Scalar command value at time t; square waves switch on the sign of
// sin(2 pi t / period) with sign(0) = +1 so t = 0 starts on the high phase.
Scalar command_value(const CommandSpec& spec, Scalar t);

enum class ControllerKind { Sac, Clsac };

struct Scenario {
    std::string name;
    StateSpace plant;
    std::optional<PfcDesign> pfc;
    RefModelConfig ref;
    GainWeights weights;
    CommandSpec command;
    Scalar dt = 1e-3;
    Scalar t_final = 40.0;
    Vector x_p0;   // empty = zero
    Vector x_pfc0; // empty = zero
    Vector x_m0;   // empty = zero
    std::optional<AdaptiveGains> gains0; // absent = zero
    std::vector<std::string> state_names; // optional plant-state labels for traces

    // Throws on inconsistent dimensions or, for Clsac, a missing Lv.
    void validate(ControllerKind controller) const;
};

// Time-indexed record of one run; one row per grid point, spacing dt.
// Gain blocks are stored flattened row-major. In SAC runs the closed-loop
// columns (y_mo, x_mo) alias the open-loop model, keeping the schema uniform.
struct SimTrace {
    ControllerKind controller = ControllerKind::Sac;
    Scalar dt = 0.0;
    Vector time;
    Matrix u_m, y_m_ol, y_mo, y_p, y_aug, e, u_p;
    Matrix x_p, x_pfc, x_m_ol, x_mo;
    Matrix k_pe, k_ie, k_px, k_ix, k_pu, k_iu;
    std::vector<std::string> state_names;

    Eigen::Index samples() const { return time.size(); }
};

class SimDivergence : public std::runtime_error {
  public:
    explicit SimDivergence(Scalar t)
        : std::runtime_error("numerical divergence at t = " + std::to_string(t)), t_(t) {}
    Scalar time() const { return t_; }

  private:
    Scalar t_;
};

// Classical fourth-order Runge-Kutta update. Throws SimDivergence when the
// result is not finite.
template <class F>
Vector rk4_step(F&& f, const Vector& x, Scalar t, Scalar dt) {
    const Vector k1 = f(t, x);
    const Vector k2 = f(t + 0.5 * dt, Vector(x + 0.5 * dt * k1));
    const Vector k3 = f(t + 0.5 * dt, Vector(x + 0.5 * dt * k2));
    const Vector k4 = f(t + dt, Vector(x + dt * k3));
    Vector next = x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!next.allFinite())
        throw SimDivergence(t);
    return next;
}

// Integrates the monolithic state [x_p; x_pfc; x_m; (x_mo); K_Ie; K_Ix; K_Iu]
// with RK4 at dt. The adaptation error is formed on the PFC-augmented output;
// the closed-loop reference model is fed y_aug. In CL-SAC runs the open-loop
// model trajectory is co-simulated for metrics.
SimTrace run(const Scenario& scenario, ControllerKind controller);

struct Metrics {
    Scalar rms_tracking_error; // RMS(y_p - y_m_ol)
    Scalar rms_model_error;    // RMS(e)
    Scalar control_energy;     // sum u_p^2 dt
    Scalar control_total_variation;
    Scalar peak_u;
};

Metrics metrics(const SimTrace& trace);

// RMS(y_mo - y_m_ol): deviation of the closed-loop model from the open-loop one.
Scalar rms_model_deviation(const SimTrace& trace);

} // namespace sac
