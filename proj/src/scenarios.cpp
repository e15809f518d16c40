#include "sacsim/scenarios.hpp"

namespace sac {
namespace scenarios {

StateSpace mav_lateral() {
    Matrix A(4, 4);
    A << -3.34, 1.93, -7.55, 7.82,
        -40.5, -2.22, 2.48, 0.0,
        234.0, -2.84, -27.0, 0.0,
        0.0, 1.0, 0.268, 0.0;
    Matrix B(4, 1);
    B << -8.41, 59.7, 793.0, 0.0;
    Matrix C(1, 4);
    C << 0.0, 0.0, 0.0, 1.0;
    return {std::move(A), std::move(B), std::move(C)};
}

StateSpace mav_actuator() {
    Matrix A(2, 2);
    A << 0.0, 1.0,
        -2367.0, -72.22;
    Matrix B(2, 1);
    B << 0.0, 2367.0;
    Matrix C(1, 2);
    C << 1.0, 0.0; // delta_r is the first actuator state
    return {std::move(A), std::move(B), std::move(C)};
}

StateSpace build_augmented_plant() {
    return series(mav_actuator(), mav_lateral());
}

TransferFunction pfc_stabilizer() {
    return {Polynomial{4.0, 40.0}, Polynomial{10.0}};
}

PfcDesign default_pfc() {
    return synthesize_pfc(pfc_stabilizer());
}

RefModelConfig mav_reference(std::optional<Scalar> lv) {
    Matrix Am(1, 1), Bm(1, 1), Cm(1, 1);
    Am << -5.0;
    Bm << 5.0;
    Cm << 1.0;
    std::optional<Matrix> Lv;
    if (lv)
        Lv = Matrix::Constant(1, 1, *lv);
    return {std::move(Am), std::move(Bm), std::move(Cm), std::move(Lv)};
}

namespace {

Scenario mav_scenario(const std::string& name, std::optional<Scalar> lv) {
    Scenario s{
        name,
        build_augmented_plant(),
        default_pfc(),
        mav_reference(lv),
        GainWeights::uniform(10.0, 5.0, 1, 1, 1),
        CommandSpec{CommandKind::Square, 0.1745, 20.0, 0.0},
    };
    s.dt = 1e-3;
    s.t_final = 40.0;
    s.state_names = {"v", "p", "r", "phi", "delta_r", "delta_r_dot"};
    return s;
}

} // namespace

DefaultScenarios default_scenarios() {
    DefaultScenarios out{mav_scenario("mav_sac", std::nullopt),
                         mav_scenario("mav_clsac", 20.0),
                         {}};
    for (Scalar lv : {10.0, 50.0, 100.0})
        out.lv_sweep.push_back(mav_scenario("mav_clsac_lv" + std::to_string(static_cast<int>(lv)),
                                            lv));
    return out;
}

} // namespace scenarios
} // namespace sac
