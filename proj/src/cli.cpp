#include "sacsim/cli.hpp"

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "sacsim/bounds.hpp"
#include "sacsim/cgt.hpp"
#include "sacsim/config_io.hpp"
#include "sacsim/scenarios.hpp"

namespace sac {
namespace cli {

namespace {

namespace fs = std::filesystem;

std::string poly_str(const Polynomial& p) {
    std::string s = "[";
    for (Eigen::Index i = 0; i < p.coeffs().size(); ++i) {
        if (i)
            s += ", ";
        s += format_float(p.coeffs()[i]);
    }
    return s + "]";
}

std::string matrix_str(const Matrix& m) {
    if (m.size() == 1)
        return format_float(m(0, 0));
    std::string s = "[";
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        if (r)
            s += "; ";
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            if (c)
                s += ", ";
            s += format_float(m(r, c));
        }
    }
    return s + "]";
}

void ensure_directory(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec)
        throw IoError("cannot create directory: " + dir.string());
}

std::ofstream open_output(const fs::path& path) {
    std::ofstream os(path);
    if (!os)
        throw IoError("cannot write file: " + path.string());
    return os;
}

const char* controller_name(ControllerKind kind) {
    return kind == ControllerKind::Sac ? "sac" : "clsac";
}

struct CommonOptions {
    std::string config;
    std::string out_dir;
    std::optional<Scalar> dt_override;
    std::optional<Scalar> t_final_override;
    int decimate = 1;
};

Scenario load_with_overrides(const CommonOptions& opts) {
    Scenario scenario = load_scenario(opts.config);
    if (opts.dt_override)
        scenario.dt = *opts.dt_override;
    if (opts.t_final_override)
        scenario.t_final = *opts.t_final_override;
    return scenario;
}

// CB of the plant as the adaptation law sees it: the PFC path contributes
// C_D B_D on top of Cp Bp.
Matrix effective_cb(const Scenario& scenario) {
    Matrix cb = scenario.plant.C * scenario.plant.B;
    if (scenario.pfc) {
        const StateSpace& d = scenario.pfc->realization.ss;
        cb += d.C * d.B;
    }
    return cb;
}

Matrix final_gain(const TraceTable& table, const std::string& base, Eigen::Index rows,
                  Eigen::Index cols) {
    Matrix g(rows, cols);
    const Eigen::Index last = table.data.rows() - 1;
    if (rows * cols == 1) {
        g(0, 0) = table.data(last, table.column(base));
        return g;
    }
    for (Eigen::Index r = 0; r < rows; ++r)
        for (Eigen::Index c = 0; c < cols; ++c)
            g(r, c) = table.data(
                last, table.column(base + "_" + std::to_string(r) + "_" + std::to_string(c)));
    return g;
}

void print_bound_report(std::ostream& os, const BoundReport& report) {
    os << "a_mm = " << matrix_str(report.A_mm) << "\n"
       << "a_mn = " << matrix_str(report.A_mn) << "\n"
       << "s1 = " << matrix_str(report.S1) << "\n"
       << "s2 = " << matrix_str(report.S2) << "\n"
       << "lambda_max_s1 = " << format_float(report.lambda_max_s1) << "\n"
       << "lambda_max_s2 = " << format_float(report.lambda_max_s2) << "\n"
       << "bound_ratio = " << format_float(report.bound_ratio) << "\n"
       << "applicable = " << (report.applicable ? "yes" : "no (bound inapplicable)") << "\n";
}

struct RunArtifacts {
    SimTrace trace;
    Metrics m;
    fs::path trace_path;
    fs::path metrics_path;
};

RunArtifacts run_and_write(const Scenario& scenario, ControllerKind controller,
                           const fs::path& out_dir, int decimate, const std::string& suffix = "") {
    RunArtifacts art{run(scenario, controller), {}, {}, {}};
    art.m = metrics(art.trace);
    ensure_directory(out_dir);
    art.trace_path = out_dir / ("trace" + suffix + ".csv");
    art.metrics_path = out_dir / ("metrics" + suffix + ".txt");
    write_trace_csv(art.trace, art.trace_path, decimate);
    auto os = open_output(art.metrics_path);
    write_metrics(os, scenario.name, controller_name(controller), art.m);
    return art;
}

void print_run_report(std::ostream& out, const Scenario& scenario, ControllerKind controller,
                      const RunArtifacts& art, Scalar wall_seconds) {
    write_metrics(out, scenario.name, controller_name(controller), art.m);
    out << "trace = " << art.trace_path.string() << "\n"
        << "metrics_file = " << art.metrics_path.string() << "\n"
        << "wall_time_s = " << format_float(wall_seconds) << "\n";
}

int cmd_tf(const CommonOptions& opts, std::ostream& out) {
    Scenario scenario = load_scenario(opts.config);
    TransferFunction T = to_transfer_function(scenario.plant);

    std::ostringstream body;
    body << "T(s) num: " << poly_str(T.num) << "\n";
    body << "T(s) den: " << poly_str(T.den) << "\n";
    if (scenario.pfc) {
        const TransferFunction& D = scenario.pfc->feedforward;
        body << "D(s) num: " << poly_str(D.num) << "\n";
        body << "D(s) den: " << poly_str(D.den) << "\n";
        AugmentedPlant F = augment_plant(T, D);
        body << "F(s) num: " << poly_str(F.tf.num) << "\n";
        body << "F(s) den: " << poly_str(F.tf.den) << "\n";
        body << "F(s) relative degree: " << F.relative_degree << "\n";
        body << "F(s) minimum phase: " << (F.minimum_phase ? "yes" : "no") << "\n";
    }
    out << body.str();
    if (!opts.out_dir.empty()) {
        ensure_directory(opts.out_dir);
        auto os = open_output(fs::path(opts.out_dir) / "tf.txt");
        os << body.str();
    }
    return kOk;
}

int cmd_check_waspr(const CommonOptions& opts, std::ostream& out) {
    Scenario scenario = load_scenario(opts.config);

    auto describe = [&](const std::string& label, const WasprCheck& check) {
        out << label << ": "
            << (check.pass ? "PASS" : (check.indeterminate ? "INDETERMINATE" : "FAIL")) << "\n";
        out << label << " CB spectrum:";
        for (const Complex& lambda : check.cb_spectrum)
            out << " " << format_float(lambda.real()) << (lambda.imag() < 0 ? "-" : "+")
                << format_float(std::abs(lambda.imag())) << "i";
        out << "\n";
        for (const auto& reason : check.reasons)
            out << label << " reason: " << reason << "\n";
    };

    describe("plant", check_waspr_sufficient(scenario.plant));

    if (scenario.pfc) {
        const StateSpace augmented = parallel(scenario.plant, scenario.pfc->realization.ss);
        describe("augmented", check_waspr_sufficient(augmented));
        if (scenario.pfc->realization.feedthrough != 0.0)
            out << "note: PFC feedthrough d0 = "
                << format_float(scenario.pfc->realization.feedthrough)
                << " not part of the state-space check\n";

        AugmentedPlant F =
            augment_plant(to_transfer_function(scenario.plant), scenario.pfc->feedforward);
        out << "F(s) relative degree: " << F.relative_degree << "\n";
        out << "F(s) minimum phase: " << (F.minimum_phase ? "yes" : "no") << "\n";

        if (!opts.out_dir.empty()) {
            auto sweep = gain_sweep_stability(F.tf, log_spaced(0.1, 1e4, 50));
            ensure_directory(opts.out_dir);
            auto os = open_output(fs::path(opts.out_dir) / "gain_sweep.csv");
            const size_t n_poles = sweep.empty() ? 0 : sweep.front().poles.size();
            os << "gain";
            for (size_t i = 0; i < n_poles; ++i)
                os << ",pole_re_" << i << ",pole_im_" << i;
            os << ",stable\n";
            for (const auto& point : sweep) {
                os << format_float(point.gain);
                for (const Complex& pole : point.poles)
                    os << "," << format_float(pole.real()) << "," << format_float(pole.imag());
                os << "," << (point.stable ? 1 : 0) << "\n";
            }
            out << "gain sweep written: " << (fs::path(opts.out_dir) / "gain_sweep.csv").string()
                << "\n";
        }
    }
    return kOk;
}

int cmd_synthesize_pfc(const CommonOptions& opts, std::ostream& out) {
    Scenario scenario = load_scenario(opts.config);
    if (!scenario.pfc)
        throw std::invalid_argument("no pfc section in config");
    const PfcDesign& pfc = *scenario.pfc;
    out << "C(s) num: " << poly_str(pfc.stabilizer.num) << "\n"
        << "C(s) den: " << poly_str(pfc.stabilizer.den) << "\n"
        << "D(s) num: " << poly_str(pfc.feedforward.num) << "\n"
        << "D(s) den: " << poly_str(pfc.feedforward.den) << "\n"
        << "D realization A: " << matrix_str(pfc.realization.ss.A) << "\n"
        << "D realization B: " << matrix_str(pfc.realization.ss.B) << "\n"
        << "D realization C: " << matrix_str(pfc.realization.ss.C) << "\n"
        << "D feedthrough d0: " << format_float(pfc.realization.feedthrough) << "\n";
    return kOk;
}

int cmd_run(const CommonOptions& opts, const std::string& controller_str, std::ostream& out) {
    const auto t0 = std::chrono::steady_clock::now();
    Scenario scenario = load_with_overrides(opts);
    const ControllerKind controller =
        controller_str == "sac" ? ControllerKind::Sac : ControllerKind::Clsac;
    RunArtifacts art = run_and_write(scenario, controller, opts.out_dir, opts.decimate);
    const Scalar wall = std::chrono::duration<Scalar>(std::chrono::steady_clock::now() - t0).count();
    print_run_report(out, scenario, controller, art, wall);
    return kOk;
}

int cmd_compare(const CommonOptions& opts, std::ostream& out) {
    const auto t0 = std::chrono::steady_clock::now();
    Scenario scenario = load_with_overrides(opts);
    if (!scenario.ref.closed_loop())
        throw std::invalid_argument("compare requires lv in the reference model");

    RunArtifacts sac_art =
        run_and_write(scenario, ControllerKind::Sac, opts.out_dir, opts.decimate, "_sac");
    RunArtifacts clsac_art =
        run_and_write(scenario, ControllerKind::Clsac, opts.out_dir, opts.decimate, "_clsac");

    std::ostringstream table;
    auto row = [&](const std::string& name, Scalar a, Scalar b) {
        table << name << ": sac = " << format_float(a) << ", clsac = " << format_float(b)
              << ", ratio = " << format_float(a != 0 ? b / a : 0.0) << "\n";
    };
    row("rms_tracking_error", sac_art.m.rms_tracking_error, clsac_art.m.rms_tracking_error);
    row("rms_model_error", sac_art.m.rms_model_error, clsac_art.m.rms_model_error);
    row("control_energy", sac_art.m.control_energy, clsac_art.m.control_energy);
    row("control_total_variation", sac_art.m.control_total_variation,
        clsac_art.m.control_total_variation);
    row("peak_u", sac_art.m.peak_u, clsac_art.m.peak_u);

    const bool tracking_better =
        clsac_art.m.rms_tracking_error < sac_art.m.rms_tracking_error;
    const bool effort_ok = clsac_art.m.control_energy <= 1.05 * sac_art.m.control_energy;
    table << (tracking_better ? "PASS" : "FAIL")
          << ": clsac rms_tracking_error < sac rms_tracking_error\n";
    table << (effort_ok ? "PASS" : "FAIL") << ": clsac control_energy <= 1.05 * sac\n";

    // Bound report with the final closed-loop error gain as the Ke snapshot.
    const Eigen::Index last = clsac_art.trace.samples() - 1;
    const Eigen::Index m = scenario.plant.outputs();
    const Matrix ke = clsac_art.trace.k_pe.row(last).reshaped(m, m).transpose() +
                      clsac_art.trace.k_ie.row(last).reshaped(m, m).transpose();
    ErrorSystemMatrices esm =
        error_system_matrices(effective_cb(scenario), ke, scenario.ref.Cm, scenario.ref.Lv);
    BoundReport report = bound_report(esm.A_mm, esm.A_mn, Matrix::Identity(m, m));
    std::ostringstream bounds_text;
    print_bound_report(bounds_text, report);

    out << table.str() << bounds_text.str();
    ensure_directory(opts.out_dir);
    auto os = open_output(fs::path(opts.out_dir) / "compare.txt");
    os << table.str() << bounds_text.str();

    const Scalar wall = std::chrono::duration<Scalar>(std::chrono::steady_clock::now() - t0).count();
    out << "wall_time_s = " << format_float(wall) << "\n";
    return kOk;
}

int cmd_sweep_lv(const CommonOptions& opts, std::vector<Scalar> values, std::ostream& out) {
    Scenario base = load_with_overrides(opts);
    if (values.empty())
        throw std::invalid_argument("sweep-lv requires at least one value");
    for (Scalar v : values) {
        if (v < 0)
            throw std::invalid_argument("sweep-lv values must be nonnegative");
    }
    std::sort(values.begin(), values.end());

    ensure_directory(opts.out_dir);
    struct Row {
        Scalar lv, rms_e_my, rms_dev, energy;
    };
    std::vector<Row> rows;
    for (Scalar lv : values) {
        Scenario scenario = base;
        scenario.ref.Lv = Matrix::Constant(scenario.ref.model_states(),
                                           scenario.ref.output_dim(), lv);
        SimTrace trace = run(scenario, ControllerKind::Clsac);
        Metrics m = metrics(trace);
        write_trace_csv(trace, fs::path(opts.out_dir) / ("trace_lv" + format_float(lv) + ".csv"),
                        opts.decimate);
        rows.push_back({lv, m.rms_model_error, rms_model_deviation(trace), m.control_energy});
    }

    auto os = open_output(fs::path(opts.out_dir) / "sweep.csv");
    os << "lv,rms_e_my,rms_model_deviation,control_energy\n";
    for (const Row& r : rows) {
        const std::string line = format_float(r.lv) + "," + format_float(r.rms_e_my) + "," +
                                 format_float(r.rms_dev) + "," + format_float(r.energy);
        os << line << "\n";
        out << line << "\n";
    }

    if (rows.size() >= 2) {
        bool err_dec = true, dev_inc = true, energy_noninc = true;
        for (size_t i = 1; i < rows.size(); ++i) {
            err_dec = err_dec && rows[i].rms_e_my < rows[i - 1].rms_e_my;
            dev_inc = dev_inc && rows[i].rms_dev > rows[i - 1].rms_dev;
            energy_noninc = energy_noninc && rows[i].energy <= rows[i - 1].energy;
        }
        out << (err_dec ? "PASS" : "FAIL") << ": rms_e_my strictly decreasing in lv\n";
        out << (dev_inc ? "PASS" : "FAIL")
            << ": rms_model_deviation strictly increasing in lv\n";
        out << (energy_noninc ? "PASS" : "FAIL") << ": control_energy non-increasing in lv\n";
    }
    return kOk;
}

int cmd_cgt_check(const CommonOptions& opts, std::ostream& out) {
    Scenario scenario = load_scenario(opts.config);
    const StateSpace& plant = scenario.plant;
    const RefModelConfig& ref = scenario.ref;

    IdealGains ol = solve_cgt_openloop(plant, ref);
    RefModelConfig ol_ref(ref.Am, ref.Bm, ref.Cm);
    out << "open-loop S11: " << matrix_str(ol.S11) << "\n"
        << "open-loop S12: " << matrix_str(ol.S12) << "\n"
        << "open-loop S21: " << matrix_str(ol.S21) << "\n"
        << "open-loop S22: " << matrix_str(ol.S22) << "\n"
        << "open-loop residual: " << format_float(cgt_residual(plant, ol_ref, ol)) << "\n";

    if (ref.closed_loop()) {
        CgtSolution cl = solve_cgt_closedloop(plant, ref, ol);
        out << "closed-loop S11: " << matrix_str(cl.gains.S11) << "\n"
            << "closed-loop S12: " << matrix_str(cl.gains.S12) << "\n"
            << "closed-loop S21: " << matrix_str(cl.gains.S21) << "\n"
            << "closed-loop S22: " << matrix_str(cl.gains.S22) << "\n"
            << "closed-loop residual: " << format_float(cl.residual) << "\n"
            << "closed-loop iterations: " << cl.iterations << "\n";
    }
    return kOk;
}

int cmd_bounds(const CommonOptions& opts, const std::string& trace_file, std::ostream& out) {
    Scenario scenario = load_scenario(opts.config);
    TraceTable table = read_trace_csv(trace_file);
    if (table.data.rows() == 0)
        throw std::invalid_argument("bounds: empty trace");

    const Eigen::Index m = scenario.plant.outputs();
    const Matrix ke = final_gain(table, "k_pe", m, m) + final_gain(table, "k_ie", m, m);
    ErrorSystemMatrices esm =
        error_system_matrices(effective_cb(scenario), ke, scenario.ref.Cm, scenario.ref.Lv);
    BoundReport report = bound_report(esm.A_mm, esm.A_mn, Matrix::Identity(m, m));
    out << "ke_final = " << matrix_str(ke) << "\n"
        << "cb = " << matrix_str(effective_cb(scenario)) << "\n";
    print_bound_report(out, report);
    return kOk;
}

int cmd_scenarios_export(const std::string& dir, std::ostream& out) {
    for (const std::string& file : export_default_scenarios(dir))
        out << "wrote " << (fs::path(dir) / file).string() << "\n";
    return kOk;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Simple Adaptive Control laboratory: W-ASPR analysis, PFC synthesis, and "
                 "SAC / CL-SAC simulation"};
    app.require_subcommand(1);

    CommonOptions opts;
    std::string controller = "sac";
    std::vector<Scalar> lv_values;
    std::string trace_file;
    std::string export_dir;
    Scalar dt_opt = 0, t_final_opt = 0;

    auto add_config = [&](CLI::App* sub) {
        sub->add_option("--config", opts.config, "scenario config file")->required();
    };
    auto add_out = [&](CLI::App* sub, bool required) {
        auto* o = sub->add_option("--out", opts.out_dir, "output directory");
        if (required)
            o->required();
    };
    auto add_sim_overrides = [&](CLI::App* sub) {
        sub->add_option("--dt", dt_opt, "integration step override [s]");
        sub->add_option("--t-final", t_final_opt, "simulation length override [s]");
        sub->add_option("--decimate", opts.decimate, "keep every n-th trace row")
            ->check(CLI::PositiveNumber);
    };

    CLI::App* tf = app.add_subcommand("tf", "print T(s), D(s), F(s) coefficient arrays");
    add_config(tf);
    add_out(tf, false);

    CLI::App* waspr = app.add_subcommand("check-waspr", "W-ASPR sufficient-condition check");
    add_config(waspr);
    add_out(waspr, false);

    CLI::App* pfc = app.add_subcommand("synthesize-pfc", "print the PFC design D(s) = 1/C(s)");
    add_config(pfc);

    CLI::App* run_cmd = app.add_subcommand("run", "simulate one controller, write trace + metrics");
    add_config(run_cmd);
    add_out(run_cmd, true);
    run_cmd->add_option("--controller", controller, "sac or clsac")
        ->required()
        ->check(CLI::IsMember({"sac", "clsac"}));
    add_sim_overrides(run_cmd);

    CLI::App* compare = app.add_subcommand("compare", "paired SAC vs CL-SAC run with verdicts");
    add_config(compare);
    add_out(compare, true);
    add_sim_overrides(compare);

    CLI::App* sweep = app.add_subcommand("sweep-lv", "CL-SAC metric sweep over lv values");
    add_config(sweep);
    add_out(sweep, true);
    sweep->add_option("--values", lv_values, "lv values")->required()->delimiter(',');
    add_sim_overrides(sweep);

    CLI::App* cgt = app.add_subcommand("cgt-check", "ideal-trajectory (CGT) solve and residuals");
    add_config(cgt);

    CLI::App* bounds_cmd =
        app.add_subcommand("bounds", "output-error bound report from a trace snapshot");
    add_config(bounds_cmd);
    bounds_cmd->add_option("--trace", trace_file, "trace CSV from a run")->required();

    CLI::App* scen = app.add_subcommand("scenarios", "built-in scenario utilities");
    scen->require_subcommand(1);
    CLI::App* scen_export = scen->add_subcommand("export", "write built-in configs as files");
    scen_export->add_option("dir", export_dir, "target directory")->required();

    try {
        app.parse(std::vector<std::string>(args.rbegin(), args.rend()));

        if (run_cmd->count("--dt") || compare->count("--dt") || sweep->count("--dt"))
            opts.dt_override = dt_opt;
        if (run_cmd->count("--t-final") || compare->count("--t-final") ||
            sweep->count("--t-final"))
            opts.t_final_override = t_final_opt;

        if (tf->parsed())
            return cmd_tf(opts, out);
        if (waspr->parsed())
            return cmd_check_waspr(opts, out);
        if (pfc->parsed())
            return cmd_synthesize_pfc(opts, out);
        if (run_cmd->parsed())
            return cmd_run(opts, controller, out);
        if (compare->parsed())
            return cmd_compare(opts, out);
        if (sweep->parsed())
            return cmd_sweep_lv(opts, lv_values, out);
        if (cgt->parsed())
            return cmd_cgt_check(opts, out);
        if (bounds_cmd->parsed())
            return cmd_bounds(opts, trace_file, out);
        if (scen->parsed())
            return cmd_scenarios_export(export_dir, out);
        err << "error: no subcommand given\n" << app.help();
        return kValidation;
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kValidation;
    } catch (const ConfigParseError& e) {
        err << "error: " << e.what() << "\n";
        return kConfigParse;
    } catch (const SimDivergence& e) {
        err << "error: " << e.what() << "\n";
        return kDivergence;
    } catch (const IoError& e) {
        err << "error: " << e.what() << "\n";
        return kIo;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "error: " << e.what() << "\n";
        return kIo;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kValidation;
    }
}

} // namespace cli
} // namespace sac
