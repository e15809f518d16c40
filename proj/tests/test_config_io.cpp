#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "sacsim/config_io.hpp"
#include "sacsim/scenarios.hpp"
#include "test_helpers.hpp"

using namespace sac;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const std::string& tag) {
    fs::path dir = fs::temp_directory_path() / ("sacsim_test_" + tag);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

} // namespace

TEST_CASE("scenario save/load round trip") {
    fs::path dir = temp_dir("roundtrip");
    Scenario original = scenarios::default_scenarios().clsac;
    save_scenario(original, dir / "scenario.json");
    Scenario loaded = load_scenario(dir / "scenario.json");

    CHECK(loaded.name == original.name);
    CHECK((loaded.plant.A - original.plant.A).norm() == 0.0);
    CHECK((loaded.plant.B - original.plant.B).norm() == 0.0);
    CHECK((loaded.plant.C - original.plant.C).norm() == 0.0);
    REQUIRE(loaded.ref.closed_loop());
    CHECK((*loaded.ref.Lv - *original.ref.Lv).norm() == 0.0);
    CHECK(loaded.weights.sigma == original.weights.sigma);
    CHECK((loaded.weights.gamma_pe - original.weights.gamma_pe).norm() == 0.0);
    CHECK(loaded.command.kind == original.command.kind);
    CHECK(loaded.command.amplitude == original.command.amplitude);
    CHECK(loaded.command.period == original.command.period);
    CHECK(loaded.dt == original.dt);
    CHECK(loaded.t_final == original.t_final);
    REQUIRE(loaded.pfc.has_value());
    CHECK(loaded.pfc->stabilizer.num == original.pfc->stabilizer.num);
    CHECK(loaded.state_names == original.state_names);
}

TEST_CASE("nonzero initial states survive the round trip") {
    fs::path dir = temp_dir("initials");
    Scenario original = scenarios::default_scenarios().clsac;
    original.x_p0 = Vector::LinSpaced(6, 0.1, 0.6);
    original.x_pfc0 = Vector::Constant(1, -0.3);
    original.x_m0 = Vector::Constant(1, 0.05);
    AdaptiveGains g = AdaptiveGains::zero(1, 1, 1);
    g.K_Ie(0, 0) = 1.5;
    original.gains0 = g;

    save_scenario(original, dir / "scenario.json");
    Scenario loaded = load_scenario(dir / "scenario.json");
    CHECK((loaded.x_p0 - original.x_p0).norm() == 0.0);
    CHECK((loaded.x_pfc0 - original.x_pfc0).norm() == 0.0);
    CHECK((loaded.x_m0 - original.x_m0).norm() == 0.0);
    REQUIRE(loaded.gains0.has_value());
    CHECK(loaded.gains0->K_Ie(0, 0) == 1.5);

    // and they shape the simulation
    loaded.validate(ControllerKind::Clsac);
    SimTrace trace = run(loaded, ControllerKind::Clsac);
    CHECK(trace.x_p(0, 0) == 0.1);
    CHECK(trace.k_ie(0, 0) == 1.5);
}

TEST_CASE("exported configs compose the actuator exactly like the built-in plant") {
    fs::path dir = temp_dir("exported");
    auto files = export_default_scenarios(dir);
    CHECK(files.size() == 5);

    Scenario loaded = load_scenario(dir / "mav_clsac.json");
    StateSpace builtin = scenarios::build_augmented_plant();
    CHECK((loaded.plant.A - builtin.A).norm() == 0.0);
    CHECK((loaded.plant.B - builtin.B).norm() == 0.0);
    CHECK((loaded.plant.C - builtin.C).norm() == 0.0);
    REQUIRE(loaded.ref.closed_loop());
    CHECK((*loaded.ref.Lv)(0, 0) == 20.0);
    CHECK(loaded.state_names ==
          std::vector<std::string>{"v", "p", "r", "phi", "delta_r", "delta_r_dot"});
    loaded.validate(ControllerKind::Clsac);

    Scenario sac = load_scenario(dir / "mav_sac.json");
    CHECK_FALSE(sac.ref.closed_loop());
}

TEST_CASE("parse errors carry line and column") {
    try {
        scenario_from_json_text("{\n  \"plant\": [oops\n}");
        FAIL("expected ConfigParseError");
    } catch (const ConfigParseError& e) {
        const std::string what = e.what();
        CHECK(what.find("line") != std::string::npos);
        CHECK(what.find("column") != std::string::npos);
    }

    CHECK_THROWS_AS(scenario_from_json_text("{}"), ConfigParseError); // missing sections
    CHECK_THROWS_AS(scenario_from_json_text(R"({"plant": {"a": "x"}})"), ConfigParseError);
}

TEST_CASE("semantic problems surface as invalid_argument, not parse errors") {
    // non-Hurwitz reference model parses fine but fails validation
    const std::string text = R"({
        "plant": {"a": [[-1.0]], "b": [[1.0]], "c": [[1.0]]},
        "reference_model": {"am": [[5.0]], "bm": [[5.0]], "cm": [[1.0]]},
        "weights": {"gamma_pe": 10, "gamma_ie": 10, "gamma_px": 10,
                     "gamma_ix": 10, "gamma_pu": 10, "gamma_iu": 10, "sigma": 5},
        "command": {"kind": "step", "amplitude": 0.1},
        "sim": {"dt": 0.001, "t_final": 1.0}
    })";
    CHECK_THROWS_AS(scenario_from_json_text(text), std::invalid_argument);
}

TEST_CASE("trace CSV round trips at printed precision") {
    Scenario scenario = scenarios::default_scenarios().clsac;
    scenario.t_final = 0.5;
    SimTrace trace = run(scenario, ControllerKind::Clsac);

    std::ostringstream os;
    write_trace_csv(trace, os);
    std::istringstream is(os.str());
    TraceTable table = read_trace_csv(is);

    CHECK(table.data.rows() == trace.samples());
    CHECK(table.columns.front() == "t");
    CHECK(table.columns[1] == "u_m");
    // full column set present for the MAV layout
    for (const char* name : {"y_m_ol", "y_mo", "y_p", "y_aug", "e", "u_p", "v", "p", "r", "phi",
                             "delta_r", "delta_r_dot", "x_pfc", "k_pe", "k_ie", "k_px", "k_ix",
                             "k_pu", "k_iu"})
        CHECK_NOTHROW(table.column(name));

    // re-serializing the parsed numbers reproduces the bytes
    std::ostringstream second;
    second << table.columns[0];
    for (size_t i = 1; i < table.columns.size(); ++i)
        second << "," << table.columns[i];
    second << "\n";
    for (Eigen::Index r = 0; r < table.data.rows(); ++r) {
        for (Eigen::Index c = 0; c < table.data.cols(); ++c)
            second << (c ? "," : "") << format_float(table.data(r, c));
        second << "\n";
    }
    CHECK(second.str() == os.str());

    // decimation keeps every n-th row
    std::ostringstream dec;
    write_trace_csv(trace, dec, 10);
    std::istringstream dec_is(dec.str());
    TraceTable dec_table = read_trace_csv(dec_is);
    CHECK(dec_table.data.rows() == (trace.samples() + 9) / 10);
    CHECK(dec_table.data(1, 0) == doctest::Approx(trace.time[10]));
}

TEST_CASE("metrics writer emits the full key set") {
    Metrics m{1.0, 2.0, 3.0, 4.0, 5.0};
    std::ostringstream os;
    write_metrics(os, "scn", "clsac", m);
    const std::string text = os.str();
    for (const char* key : {"scenario = scn", "controller = clsac", "rms_tracking_error = 1",
                            "rms_model_error = 2", "control_energy = 3",
                            "control_total_variation = 4", "peak_u = 5"})
        CHECK(text.find(key) != std::string::npos);
}
