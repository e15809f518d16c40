#include "sacsim/sim_engine.hpp"

#include <cmath>
#include <numbers>

namespace sac {

Scalar command_value(const CommandSpec& spec, Scalar t) {
    switch (spec.kind) {
    case CommandKind::Step:
        return spec.amplitude;
    case CommandKind::Square: {
        const Scalar phase = std::sin(2.0 * std::numbers::pi_v<Scalar> * t / spec.period);
        return spec.amplitude * (phase >= 0 ? 1.0 : -1.0) + spec.offset;
    }
    case CommandKind::Constant:
        return spec.amplitude;
    }
    throw std::logic_error("command_value: unknown command kind");
}

void Scenario::validate(ControllerKind controller) const {
    if (!(dt > 0))
        throw std::invalid_argument("Scenario: dt must be positive");
    if (t_final < dt)
        throw std::invalid_argument("Scenario: t_final must be at least dt");
    if (plant.inputs() != plant.outputs())
        throw std::invalid_argument("Scenario: square plant required (m == p)");
    if (ref.output_dim() != plant.outputs())
        throw std::invalid_argument("Scenario: reference model output dimension must match plant");
    if (ref.command_dim() != 1)
        throw std::invalid_argument("Scenario: scalar command expected (Bm must have one column)");
    if (command.kind == CommandKind::Square && !(command.period > 0))
        throw std::invalid_argument("Scenario: square command requires a positive period");
    if (controller == ControllerKind::Clsac && !ref.closed_loop())
        throw std::invalid_argument("Scenario: closed-loop gain not configured");
    if (pfc) {
        if (pfc->realization.ss.inputs() != plant.inputs() ||
            pfc->realization.ss.outputs() != plant.outputs())
            throw std::invalid_argument("Scenario: PFC dimensions must match plant");
    }
    if (x_p0.size() != 0 && x_p0.size() != plant.states())
        throw std::invalid_argument("Scenario: x_p0 dimension mismatch");
    if (x_pfc0.size() != 0 && (!pfc || x_pfc0.size() != pfc->realization.ss.states()))
        throw std::invalid_argument("Scenario: x_pfc0 dimension mismatch");
    if (x_m0.size() != 0 && x_m0.size() != ref.model_states())
        throw std::invalid_argument("Scenario: x_m0 dimension mismatch");
    const Eigen::Index m = plant.outputs(), nm = ref.model_states(), mm = ref.command_dim();
    if (gains0 && (gains0->K_Ie.rows() != m || gains0->K_Ie.cols() != m ||
                   gains0->K_Ix.rows() != m || gains0->K_Ix.cols() != nm ||
                   gains0->K_Iu.rows() != m || gains0->K_Iu.cols() != mm))
        throw std::invalid_argument("Scenario: initial gain dimension mismatch");
    if (!state_names.empty() && state_names.size() != static_cast<size_t>(plant.states()))
        throw std::invalid_argument("Scenario: state_names size mismatch");
    if (weights.gamma_pe.rows() != m || weights.gamma_px.rows() != nm ||
        weights.gamma_pu.rows() != mm)
        throw std::invalid_argument("Scenario: weight dimensions must match (m, n_m, m_m)");
}

namespace {

// Offsets of each block inside the monolithic state vector.
struct StateLayout {
    Eigen::Index np, nd, nm, m, mm;
    bool closed_loop;
    Eigen::Index x_p, x_pfc, x_m_ol, x_mo, k_ie, k_ix, k_iu, total;

    StateLayout(const Scenario& s, ControllerKind controller) {
        np = s.plant.states();
        nd = s.pfc ? s.pfc->realization.ss.states() : 0;
        nm = s.ref.model_states();
        m = s.plant.outputs();
        mm = s.ref.command_dim();
        closed_loop = controller == ControllerKind::Clsac;
        x_p = 0;
        x_pfc = x_p + np;
        x_m_ol = x_pfc + nd;
        x_mo = x_m_ol + nm;
        k_ie = x_mo + (closed_loop ? nm : 0);
        k_ix = k_ie + m * m;
        k_iu = k_ix + m * nm;
        total = k_iu + m * mm;
    }
};

struct Signals {
    Vector u_m, y_p, y_aug, y_m_ol, y_mo, e, u_p;
    ProportionalGains prop;
};

AdaptiveGains unpack_gains(const StateLayout& L, const Vector& z) {
    return {Matrix(z.segment(L.k_ie, L.m * L.m).reshaped(L.m, L.m)),
            Matrix(z.segment(L.k_ix, L.m * L.nm).reshaped(L.m, L.nm)),
            Matrix(z.segment(L.k_iu, L.m * L.mm).reshaped(L.m, L.mm))};
}

} // namespace

SimTrace run(const Scenario& scenario, ControllerKind controller) {
    scenario.validate(controller);
    const StateLayout L(scenario, controller);
    const StateSpace& plant = scenario.plant;
    const RefModelConfig& ref = scenario.ref;
    const bool has_pfc = scenario.pfc.has_value();
    const Scalar d0 = has_pfc ? scenario.pfc->realization.feedthrough : 0.0;

    Vector z = Vector::Zero(L.total);
    if (scenario.x_p0.size() > 0)
        z.segment(L.x_p, L.np) = scenario.x_p0;
    if (scenario.x_pfc0.size() > 0)
        z.segment(L.x_pfc, L.nd) = scenario.x_pfc0;
    if (scenario.x_m0.size() > 0) {
        z.segment(L.x_m_ol, L.nm) = scenario.x_m0;
        if (L.closed_loop)
            z.segment(L.x_mo, L.nm) = scenario.x_m0;
    }
    if (scenario.gains0) {
        z.segment(L.k_ie, L.m * L.m) = scenario.gains0->K_Ie.reshaped();
        z.segment(L.k_ix, L.m * L.nm) = scenario.gains0->K_Ix.reshaped();
        z.segment(L.k_iu, L.m * L.mm) = scenario.gains0->K_Iu.reshaped();
    }

    // The d0 feedthrough closes an algebraic loop; it is broken with the
    // previous grid point's control. Zero for strictly proper PFCs.
    Vector u_d0_feed = Vector::Zero(L.m);

    auto wire = [&](Scalar t, const Vector& state, const Vector& d0_feed) {
        Signals s;
        s.u_m = Vector::Constant(1, command_value(scenario.command, t));
        s.y_p = plant.C * state.segment(L.x_p, L.np);
        s.y_aug = s.y_p;
        if (has_pfc)
            s.y_aug += scenario.pfc->realization.ss.C * state.segment(L.x_pfc, L.nd) +
                       d0 * d0_feed;
        s.y_m_ol = ref.Cm * state.segment(L.x_m_ol, L.nm);
        s.y_mo = L.closed_loop ? Vector(ref.Cm * state.segment(L.x_mo, L.nm)) : s.y_m_ol;
        s.e = s.y_mo - s.y_aug;
        const Vector& x_active = L.closed_loop ? Vector(state.segment(L.x_mo, L.nm))
                                               : Vector(state.segment(L.x_m_ol, L.nm));
        AdaptiveGains gains = unpack_gains(L, state);
        s.prop = proportional_gains(s.e, x_active, s.u_m, scenario.weights);
        s.u_p = control(s.e, x_active, s.u_m, gains, scenario.weights);
        return s;
    };

    auto derivative = [&](Scalar t, const Vector& state) {
        const Signals s = wire(t, state, u_d0_feed);
        const Vector x_active = L.closed_loop ? Vector(state.segment(L.x_mo, L.nm))
                                              : Vector(state.segment(L.x_m_ol, L.nm));
        Vector dz(L.total);
        dz.segment(L.x_p, L.np) =
            plant.A * state.segment(L.x_p, L.np) + plant.B * s.u_p;
        if (L.nd > 0)
            dz.segment(L.x_pfc, L.nd) =
                scenario.pfc->realization.ss.A * state.segment(L.x_pfc, L.nd) +
                scenario.pfc->realization.ss.B * s.u_p;
        dz.segment(L.x_m_ol, L.nm) =
            ol_derivative(ref, Vector(state.segment(L.x_m_ol, L.nm)), s.u_m);
        if (L.closed_loop)
            dz.segment(L.x_mo, L.nm) =
                cl_derivative(ref, Vector(state.segment(L.x_mo, L.nm)), s.u_m, s.y_aug);
        const AdaptiveGains gains = unpack_gains(L, state);
        const GainDerivatives gd =
            integral_gain_derivatives(s.e, x_active, s.u_m, gains, scenario.weights);
        dz.segment(L.k_ie, L.m * L.m) = gd.dK_Ie.reshaped();
        dz.segment(L.k_ix, L.m * L.nm) = gd.dK_Ix.reshaped();
        dz.segment(L.k_iu, L.m * L.mm) = gd.dK_Iu.reshaped();
        return dz;
    };

    const Eigen::Index steps =
        static_cast<Eigen::Index>(std::floor(scenario.t_final / scenario.dt + 1e-9));
    const Eigen::Index samples = steps + 1;

    SimTrace trace;
    trace.controller = controller;
    trace.dt = scenario.dt;
    trace.state_names = scenario.state_names;
    trace.time.resize(samples);
    trace.u_m.resize(samples, 1);
    trace.y_m_ol.resize(samples, L.m);
    trace.y_mo.resize(samples, L.m);
    trace.y_p.resize(samples, L.m);
    trace.y_aug.resize(samples, L.m);
    trace.e.resize(samples, L.m);
    trace.u_p.resize(samples, L.m);
    trace.x_p.resize(samples, L.np);
    trace.x_pfc.resize(samples, L.nd);
    trace.x_m_ol.resize(samples, L.nm);
    trace.x_mo.resize(samples, L.nm);
    trace.k_pe.resize(samples, L.m * L.m);
    trace.k_ie.resize(samples, L.m * L.m);
    trace.k_px.resize(samples, L.m * L.nm);
    trace.k_ix.resize(samples, L.m * L.nm);
    trace.k_pu.resize(samples, L.m * L.mm);
    trace.k_iu.resize(samples, L.m * L.mm);

    for (Eigen::Index k = 0; k < samples; ++k) {
        const Scalar t = static_cast<Scalar>(k) * scenario.dt;
        const Signals s = wire(t, z, u_d0_feed);
        const AdaptiveGains gains = unpack_gains(L, z);

        trace.time[k] = t;
        trace.u_m.row(k) = s.u_m.transpose();
        trace.y_m_ol.row(k) = s.y_m_ol.transpose();
        trace.y_mo.row(k) = s.y_mo.transpose();
        trace.y_p.row(k) = s.y_p.transpose();
        trace.y_aug.row(k) = s.y_aug.transpose();
        trace.e.row(k) = s.e.transpose();
        trace.u_p.row(k) = s.u_p.transpose();
        trace.x_p.row(k) = z.segment(L.x_p, L.np).transpose();
        trace.x_pfc.row(k) = z.segment(L.x_pfc, L.nd).transpose();
        trace.x_m_ol.row(k) = z.segment(L.x_m_ol, L.nm).transpose();
        trace.x_mo.row(k) = L.closed_loop ? z.segment(L.x_mo, L.nm).transpose()
                                          : z.segment(L.x_m_ol, L.nm).transpose();
        trace.k_pe.row(k) = s.prop.K_pe.reshaped<Eigen::RowMajor>().transpose();
        trace.k_ie.row(k) = gains.K_Ie.reshaped<Eigen::RowMajor>().transpose();
        trace.k_px.row(k) = s.prop.K_px.reshaped<Eigen::RowMajor>().transpose();
        trace.k_ix.row(k) = gains.K_Ix.reshaped<Eigen::RowMajor>().transpose();
        trace.k_pu.row(k) = s.prop.K_pu.reshaped<Eigen::RowMajor>().transpose();
        trace.k_iu.row(k) = gains.K_Iu.reshaped<Eigen::RowMajor>().transpose();

        if (k + 1 < samples) {
            u_d0_feed = s.u_p;
            z = rk4_step(derivative, z, t, scenario.dt);
        }
    }
    return trace;
}

Metrics metrics(const SimTrace& trace) {
    if (trace.samples() == 0)
        throw std::invalid_argument("metrics: empty trace");
    const Eigen::Index n = trace.samples();

    Metrics out{};
    out.rms_tracking_error = std::sqrt((trace.y_p - trace.y_m_ol).squaredNorm() / n);
    out.rms_model_error = std::sqrt(trace.e.squaredNorm() / n);
    out.control_energy = trace.u_p.squaredNorm() * trace.dt;
    out.control_total_variation = 0.0;
    for (Eigen::Index k = 0; k + 1 < n; ++k)
        out.control_total_variation += (trace.u_p.row(k + 1) - trace.u_p.row(k)).cwiseAbs().sum();
    out.peak_u = trace.u_p.cwiseAbs().maxCoeff();
    return out;
}

Scalar rms_model_deviation(const SimTrace& trace) {
    if (trace.samples() == 0)
        throw std::invalid_argument("rms_model_deviation: empty trace");
    return std::sqrt((trace.y_mo - trace.y_m_ol).squaredNorm() / trace.samples());
}

} // namespace sac
