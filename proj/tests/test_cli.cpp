#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "sacsim/cli.hpp"
#include "sacsim/config_io.hpp"
#include "sacsim/scenarios.hpp"

using namespace sac;
namespace fs = std::filesystem;

namespace {

struct CliResult {
    int code;
    std::string out;
    std::string err;
};

CliResult run_cli(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path temp_dir(const std::string& tag) {
    fs::path dir = fs::temp_directory_path() / ("sacsim_cli_" + tag);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

fs::path write_text(const fs::path& path, const std::string& text) {
    std::ofstream os(path);
    os << text;
    return path;
}

const std::string kIntegratorConfig = R"({
    "plant": {"a": [[0.0]], "b": [[1.0]], "c": [[1.0]]},
    "reference_model": {"am": [[-5.0]], "bm": [[5.0]], "cm": [[1.0]], "lv": [[2.0]]},
    "weights": {"gamma_pe": 10, "gamma_ie": 10, "gamma_px": 10,
                 "gamma_ix": 10, "gamma_pu": 10, "gamma_iu": 10, "sigma": 5},
    "command": {"kind": "step", "amplitude": 0.1},
    "sim": {"dt": 0.001, "t_final": 1.0}
})";

fs::path exported_config(const fs::path& dir, const std::string& name) {
    export_default_scenarios(dir);
    return dir / name;
}

} // namespace

TEST_CASE("cli: help and usage errors") {
    CHECK(run_cli({"--help"}).code == cli::kOk);
    CHECK(run_cli({}).code == cli::kValidation);
    CHECK(run_cli({"run", "--config", "x.json"}).code == cli::kValidation); // missing required
    CHECK(run_cli({"run", "--config", "x.json", "--out", "y", "--controller", "bogus"}).code ==
          cli::kValidation);
}

TEST_CASE("cli: tf prints coefficient arrays") {
    fs::path dir = temp_dir("tf");
    fs::path config = write_text(dir / "integrator.json", kIntegratorConfig);

    CliResult r = run_cli({"tf", "--config", config.string()});
    CHECK(r.code == cli::kOk);
    CHECK(r.out.find("num: [1]") != std::string::npos);
    CHECK(r.out.find("den: [1, 0]") != std::string::npos);

    // MAV config gains D(s) and F(s) blocks and an optional file
    fs::path mav = exported_config(dir, "mav_clsac.json");
    r = run_cli({"tf", "--config", mav.string(), "--out", (dir / "tf_out").string()});
    CHECK(r.code == cli::kOk);
    CHECK(r.out.find("T(s) num:") != std::string::npos);
    CHECK(r.out.find("F(s) minimum phase: yes") != std::string::npos);
    CHECK(fs::exists(dir / "tf_out" / "tf.txt"));

    // malformed config: exit 2, no output files
    fs::path bad = write_text(dir / "bad.json", "{ nope");
    r = run_cli({"tf", "--config", bad.string(), "--out", (dir / "bad_out").string()});
    CHECK(r.code == cli::kConfigParse);
    CHECK_FALSE(fs::exists(dir / "bad_out" / "tf.txt"));

    // MIMO plant: validation error
    fs::path mimo = write_text(dir / "mimo.json", R"({
        "plant": {"a": [[-1.0, 0.0], [0.0, -2.0]], "b": [[1.0, 0.0], [0.0, 1.0]],
                   "c": [[1.0, 0.0], [0.0, 1.0]]},
        "reference_model": {"am": [[-5.0]], "bm": [[5.0]], "cm": [[1.0, 0.0]]},
        "weights": {"gamma_pe": 10, "gamma_ie": 10, "gamma_px": 10,
                     "gamma_ix": 10, "gamma_pu": 10, "gamma_iu": 10, "sigma": 5},
        "command": {"kind": "step", "amplitude": 0.1},
        "sim": {"dt": 0.001, "t_final": 1.0}
    })");
    r = run_cli({"tf", "--config", mimo.string()});
    CHECK(r.code == cli::kValidation);
}

TEST_CASE("cli: check-waspr and synthesize-pfc") {
    fs::path dir = temp_dir("waspr");
    fs::path mav = exported_config(dir, "mav_clsac.json");

    CliResult r = run_cli({"check-waspr", "--config", mav.string(), "--out", dir.string()});
    CHECK(r.code == cli::kOk);
    CHECK(r.out.find("plant: FAIL") != std::string::npos);
    CHECK(r.out.find("augmented: PASS") != std::string::npos);
    CHECK(fs::exists(dir / "gain_sweep.csv"));
    std::ifstream sweep(dir / "gain_sweep.csv");
    std::string header;
    std::getline(sweep, header);
    CHECK(header.find("gain,pole_re_0,pole_im_0") != std::string::npos);
    CHECK(header.find("stable") != std::string::npos);
    int rows = 0;
    for (std::string line; std::getline(sweep, line);)
        rows += line.empty() ? 0 : 1;
    CHECK(rows == 50);

    r = run_cli({"synthesize-pfc", "--config", mav.string()});
    CHECK(r.code == cli::kOk);
    CHECK(r.out.find("D(s) num: [10]") != std::string::npos);
    CHECK(r.out.find("D(s) den: [4, 40]") != std::string::npos);
    CHECK(r.out.find("d0: 0") != std::string::npos);
}

TEST_CASE("cli: run writes trace and metrics, honors the exit contract") {
    fs::path dir = temp_dir("run");
    fs::path mav = exported_config(dir, "mav_clsac.json");
    fs::path out = dir / "out";

    CliResult r = run_cli({"run", "--config", mav.string(), "--controller", "clsac", "--out",
                           out.string(), "--t-final", "2.0"});
    CHECK(r.code == cli::kOk);
    CHECK(fs::exists(out / "trace.csv"));
    CHECK(fs::exists(out / "metrics.txt"));
    CHECK(r.out.find("controller = clsac") != std::string::npos);

    // clsac without lv in the config: validation error
    fs::path sac_only = dir / "mav_sac.json";
    r = run_cli({"run", "--config", sac_only.string(), "--controller", "clsac", "--out",
                 (dir / "out2").string(), "--t-final", "1.0"});
    CHECK(r.code == cli::kValidation);
    CHECK(r.err.find("closed-loop gain not configured") != std::string::npos);

    // divergence: exit 4 with the failure time in the message
    fs::path boom = write_text(dir / "boom.json", R"({
        "plant": {"a": [[1e8]], "b": [[1.0]], "c": [[1.0]]},
        "reference_model": {"am": [[-5.0]], "bm": [[5.0]], "cm": [[1.0]]},
        "weights": {"gamma_pe": 10, "gamma_ie": 10, "gamma_px": 10,
                     "gamma_ix": 10, "gamma_pu": 10, "gamma_iu": 10, "sigma": 5},
        "command": {"kind": "step", "amplitude": 1.0},
        "sim": {"dt": 0.001, "t_final": 1.0}
    })");
    r = run_cli({"run", "--config", boom.string(), "--controller", "sac", "--out",
                 (dir / "out3").string()});
    CHECK(r.code == cli::kDivergence);
    CHECK(r.err.find("divergence at t") != std::string::npos);

    // unwritable output directory: exit 5
    fs::path blocker = write_text(dir / "blocker", "file, not a directory");
    r = run_cli({"run", "--config", mav.string(), "--controller", "sac", "--out",
                 (blocker / "nested").string(), "--t-final", "1.0"});
    CHECK(r.code == cli::kIo);
}

TEST_CASE("cli: determinism of run outputs") {
    fs::path dir = temp_dir("determinism");
    fs::path mav = exported_config(dir, "mav_clsac.json");
    for (const char* tag : {"a", "b"}) {
        CliResult r = run_cli({"run", "--config", mav.string(), "--controller", "clsac", "--out",
                               (dir / tag).string(), "--t-final", "1.0"});
        REQUIRE(r.code == cli::kOk);
    }
    std::ifstream fa(dir / "a" / "trace.csv"), fb(dir / "b" / "trace.csv");
    std::stringstream sa, sb;
    sa << fa.rdbuf();
    sb << fb.rdbuf();
    CHECK(sa.str() == sb.str());
    CHECK_FALSE(sa.str().empty());
}

TEST_CASE("cli: compare emits the table and verdict flags") {
    fs::path dir = temp_dir("compare");
    fs::path mav = exported_config(dir, "mav_clsac.json");
    fs::path out = dir / "cmp";

    CliResult r = run_cli({"compare", "--config", mav.string(), "--out", out.string(),
                           "--t-final", "2.0"});
    CHECK(r.code == cli::kOk);
    CHECK(fs::exists(out / "trace_sac.csv"));
    CHECK(fs::exists(out / "trace_clsac.csv"));
    CHECK(fs::exists(out / "compare.txt"));
    CHECK(r.out.find("rms_tracking_error:") != std::string::npos);
    CHECK(r.out.find("control_energy") != std::string::npos);
    CHECK(r.out.find("ratio") != std::string::npos);
    CHECK(r.out.find("lambda_max_s1") != std::string::npos);

    // lv absent: validation
    r = run_cli({"compare", "--config", (dir / "mav_sac.json").string(), "--out",
                 (dir / "cmp2").string(), "--t-final", "1.0"});
    CHECK(r.code == cli::kValidation);
}

TEST_CASE("cli: sweep-lv rows and verdicts") {
    fs::path dir = temp_dir("sweep");
    fs::path mav = exported_config(dir, "mav_clsac.json");

    // single value: one row, no verdicts
    CliResult r = run_cli({"sweep-lv", "--config", mav.string(), "--values", "20", "--out",
                           (dir / "one").string(), "--t-final", "1.0"});
    CHECK(r.code == cli::kOk);
    CHECK(r.out.find("PASS") == std::string::npos);
    CHECK(fs::exists(dir / "one" / "sweep.csv"));
    CHECK(fs::exists(dir / "one" / "trace_lv20.csv"));

    // lv = 0 degenerates to the SAC baseline
    r = run_cli({"sweep-lv", "--config", mav.string(), "--values", "0", "--out",
                 (dir / "zero").string(), "--t-final", "1.0"});
    CHECK(r.code == cli::kOk);
    CliResult sac_run = run_cli({"run", "--config", (dir / "mav_sac.json").string(),
                                 "--controller", "sac", "--out", (dir / "sac").string(),
                                 "--t-final", "1.0"});
    REQUIRE(sac_run.code == cli::kOk);
    TraceTable sweep_table = read_trace_csv(dir / "zero" / "sweep.csv");
    std::ifstream metrics_file(dir / "sac" / "metrics.txt");
    std::string line, rms_line;
    while (std::getline(metrics_file, line))
        if (line.rfind("rms_model_error", 0) == 0)
            rms_line = line;
    const Scalar sac_rms = std::stod(rms_line.substr(rms_line.find('=') + 1));
    CHECK(sweep_table.data(0, sweep_table.column("rms_e_my")) ==
          doctest::Approx(sac_rms).epsilon(1e-12));

    // negative values rejected
    r = run_cli({"sweep-lv", "--config", mav.string(), "--values", "-1", "--out",
                 (dir / "neg").string()});
    CHECK(r.code == cli::kValidation);
}

TEST_CASE("cli: cgt-check prints blocks and residuals") {
    fs::path dir = temp_dir("cgt");
    fs::path mav = exported_config(dir, "mav_clsac.json");
    CliResult r = run_cli({"cgt-check", "--config", mav.string()});
    CHECK(r.code == cli::kOk);
    CHECK(r.out.find("open-loop S11:") != std::string::npos);
    CHECK(r.out.find("open-loop residual:") != std::string::npos);
    CHECK(r.out.find("closed-loop residual:") != std::string::npos);
}

TEST_CASE("cli: bounds consumes a trace") {
    fs::path dir = temp_dir("bounds");
    fs::path mav = exported_config(dir, "mav_clsac.json");
    fs::path out = dir / "run";
    REQUIRE(run_cli({"run", "--config", mav.string(), "--controller", "clsac", "--out",
                     out.string(), "--t-final", "2.0"})
                .code == cli::kOk);
    CliResult r = run_cli({"bounds", "--config", mav.string(), "--trace",
                           (out / "trace.csv").string()});
    CHECK(r.code == cli::kOk);
    CHECK(r.out.find("ke_final =") != std::string::npos);
    CHECK(r.out.find("lambda_max_s1 =") != std::string::npos);
    CHECK(r.out.find("bound_ratio =") != std::string::npos);
}

TEST_CASE("cli: scenarios export") {
    fs::path dir = temp_dir("export");
    CliResult r = run_cli({"scenarios", "export", dir.string()});
    CHECK(r.code == cli::kOk);
    for (const char* name : {"mav_sac.json", "mav_clsac.json", "mav_clsac_lv10.json",
                             "mav_clsac_lv50.json", "mav_clsac_lv100.json"})
        CHECK(fs::exists(dir / name));
    // every exported config loads and validates
    Scenario sac = load_scenario(dir / "mav_sac.json");
    sac.validate(ControllerKind::Sac);
}
