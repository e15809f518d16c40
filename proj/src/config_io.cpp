#include "sacsim/config_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "sacsim/scenarios.hpp"

namespace sac {

using nlohmann::json;

namespace {

[[noreturn]] void parse_fail(const std::string& what) {
    throw ConfigParseError(what);
}

// nlohmann reports byte offsets; convert to line/column for the message.
[[noreturn]] void rethrow_with_position(const json::parse_error& e, const std::string& text) {
    size_t line = 1, column = 1;
    const size_t stop = std::min(text.size(), e.byte > 0 ? e.byte - 1 : 0);
    for (size_t i = 0; i < stop; ++i) {
        if (text[i] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
    parse_fail("config parse error at line " + std::to_string(line) + ", column " +
               std::to_string(column) + ": " + e.what());
}

const json& require(const json& j, const std::string& key, const std::string& section) {
    auto it = j.find(key);
    if (it == j.end())
        parse_fail("missing key '" + key + "' in section '" + section + "'");
    return *it;
}

Matrix matrix_from_json(const json& j, const std::string& name) {
    if (j.is_number())
        return Matrix::Constant(1, 1, j.get<Scalar>());
    if (!j.is_array() || j.empty())
        parse_fail("'" + name + "' must be a number or a non-empty array");
    if (j.front().is_number()) { // flat array = column vector
        Matrix m(static_cast<Eigen::Index>(j.size()), 1);
        Eigen::Index r = 0;
        for (const auto& v : j) {
            if (!v.is_number())
                parse_fail("'" + name + "' has a non-numeric entry");
            m(r++, 0) = v.get<Scalar>();
        }
        return m;
    }
    const Eigen::Index rows = static_cast<Eigen::Index>(j.size());
    const Eigen::Index cols = static_cast<Eigen::Index>(j.front().size());
    Matrix m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const auto& row = j[static_cast<size_t>(r)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
            parse_fail("'" + name + "' rows must be arrays of equal length");
        for (Eigen::Index c = 0; c < cols; ++c) {
            const auto& v = row[static_cast<size_t>(c)];
            if (!v.is_number())
                parse_fail("'" + name + "' has a non-numeric entry");
            m(r, c) = v.get<Scalar>();
        }
    }
    return m;
}

Vector vector_from_json(const json& j, const std::string& name) {
    Matrix m = matrix_from_json(j, name);
    if (m.cols() != 1)
        parse_fail("'" + name + "' must be a vector");
    return Vector(m.col(0));
}

Polynomial polynomial_from_json(const json& j, const std::string& name) {
    if (!j.is_array() || j.empty())
        parse_fail("'" + name + "' must be a non-empty coefficient array");
    Vector c(static_cast<Eigen::Index>(j.size()));
    Eigen::Index i = 0;
    for (const auto& v : j) {
        if (!v.is_number())
            parse_fail("'" + name + "' has a non-numeric entry");
        c[i++] = v.get<Scalar>();
    }
    return Polynomial(c);
}

Scalar number_from_json(const json& j, const std::string& name) {
    if (!j.is_number())
        parse_fail("'" + name + "' must be a number");
    return j.get<Scalar>();
}

StateSpace state_space_from_json(const json& j, const std::string& section) {
    return {matrix_from_json(require(j, "a", section), section + ".a"),
            matrix_from_json(require(j, "b", section), section + ".b"),
            matrix_from_json(require(j, "c", section), section + ".c")};
}

json matrix_to_json(const Matrix& m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c)
            row.push_back(m(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

json polynomial_to_json(const Polynomial& p) {
    json coeffs = json::array();
    for (Eigen::Index i = 0; i < p.coeffs().size(); ++i)
        coeffs.push_back(p.coeffs()[i]);
    return coeffs;
}

Scenario scenario_from_json(const json& j, const std::string& default_name) {
    const json& plant_j = require(j, "plant", "config");
    StateSpace plant = state_space_from_json(plant_j, "plant");
    std::vector<std::string> state_names;
    if (auto it = plant_j.find("state_names"); it != plant_j.end()) {
        for (const auto& v : *it)
            state_names.push_back(v.get<std::string>());
    }

    if (auto it = j.find("actuator"); it != j.end()) {
        StateSpace actuator = state_space_from_json(*it, "actuator");
        plant = series(actuator, plant);
        if (!state_names.empty()) {
            if (auto names = it->find("state_names"); names != it->end()) {
                for (const auto& v : *names)
                    state_names.push_back(v.get<std::string>());
            } else {
                state_names.clear();
            }
        }
    }

    std::optional<PfcDesign> pfc;
    if (auto it = j.find("pfc"); it != j.end()) {
        pfc = synthesize_pfc({polynomial_from_json(require(*it, "c_num", "pfc"), "pfc.c_num"),
                              polynomial_from_json(require(*it, "c_den", "pfc"), "pfc.c_den")});
    }

    const json& ref_j = require(j, "reference_model", "config");
    std::optional<Matrix> lv;
    if (auto it = ref_j.find("lv"); it != ref_j.end() && !it->is_null())
        lv = matrix_from_json(*it, "reference_model.lv");
    RefModelConfig ref(matrix_from_json(require(ref_j, "am", "reference_model"), "am"),
                       matrix_from_json(require(ref_j, "bm", "reference_model"), "bm"),
                       matrix_from_json(require(ref_j, "cm", "reference_model"), "cm"),
                       std::move(lv));

    const json& w = require(j, "weights", "config");
    GainWeights weights(matrix_from_json(require(w, "gamma_pe", "weights"), "gamma_pe"),
                        matrix_from_json(require(w, "gamma_ie", "weights"), "gamma_ie"),
                        matrix_from_json(require(w, "gamma_px", "weights"), "gamma_px"),
                        matrix_from_json(require(w, "gamma_ix", "weights"), "gamma_ix"),
                        matrix_from_json(require(w, "gamma_pu", "weights"), "gamma_pu"),
                        matrix_from_json(require(w, "gamma_iu", "weights"), "gamma_iu"),
                        number_from_json(require(w, "sigma", "weights"), "sigma"),
                        w.value("leak_all", false));

    const json& cmd_j = require(j, "command", "config");
    CommandSpec command;
    const std::string kind = require(cmd_j, "kind", "command").get<std::string>();
    if (kind == "step")
        command.kind = CommandKind::Step;
    else if (kind == "square")
        command.kind = CommandKind::Square;
    else if (kind == "constant")
        command.kind = CommandKind::Constant;
    else
        parse_fail("command.kind must be one of step|square|constant");
    command.amplitude = number_from_json(require(cmd_j, "amplitude", "command"), "amplitude");
    if (command.kind == CommandKind::Square)
        command.period = number_from_json(require(cmd_j, "period", "command"), "period");
    command.offset = cmd_j.value("offset", 0.0);

    const json& sim_j = require(j, "sim", "config");

    Scenario scenario{j.value("name", default_name),
                      std::move(plant),
                      std::move(pfc),
                      std::move(ref),
                      std::move(weights),
                      command};
    scenario.dt = number_from_json(require(sim_j, "dt", "sim"), "dt");
    scenario.t_final = number_from_json(require(sim_j, "t_final", "sim"), "t_final");
    scenario.state_names = std::move(state_names);

    if (auto it = j.find("initial"); it != j.end()) {
        if (auto x = it->find("x_p"); x != it->end())
            scenario.x_p0 = vector_from_json(*x, "initial.x_p");
        if (auto x = it->find("x_pfc"); x != it->end())
            scenario.x_pfc0 = vector_from_json(*x, "initial.x_pfc");
        if (auto x = it->find("x_m"); x != it->end())
            scenario.x_m0 = vector_from_json(*x, "initial.x_m");
        const bool any_gain = it->contains("k_ie") || it->contains("k_ix") || it->contains("k_iu");
        if (any_gain) {
            AdaptiveGains g = AdaptiveGains::zero(scenario.plant.outputs(),
                                                  scenario.ref.model_states(),
                                                  scenario.ref.command_dim());
            if (auto x = it->find("k_ie"); x != it->end())
                g.K_Ie = matrix_from_json(*x, "initial.k_ie");
            if (auto x = it->find("k_ix"); x != it->end())
                g.K_Ix = matrix_from_json(*x, "initial.k_ix");
            if (auto x = it->find("k_iu"); x != it->end())
                g.K_Iu = matrix_from_json(*x, "initial.k_iu");
            scenario.gains0 = std::move(g);
        }
    }
    return scenario;
}

} // namespace

Scenario scenario_from_json_text(const std::string& text, const std::string& default_name) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        rethrow_with_position(e, text);
    }
    return scenario_from_json(j, default_name);
}

Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is)
        throw IoError("cannot open config file: " + path.string());
    std::ostringstream buffer;
    buffer << is.rdbuf();
    return scenario_from_json_text(buffer.str(), path.stem().string());
}

std::string scenario_to_json_text(const Scenario& scenario) {
    json j;
    j["name"] = scenario.name;
    j["plant"]["a"] = matrix_to_json(scenario.plant.A);
    j["plant"]["b"] = matrix_to_json(scenario.plant.B);
    j["plant"]["c"] = matrix_to_json(scenario.plant.C);
    if (!scenario.state_names.empty())
        j["plant"]["state_names"] = scenario.state_names;
    if (scenario.pfc) {
        j["pfc"]["c_num"] = polynomial_to_json(scenario.pfc->stabilizer.num);
        j["pfc"]["c_den"] = polynomial_to_json(scenario.pfc->stabilizer.den);
    }
    j["reference_model"]["am"] = matrix_to_json(scenario.ref.Am);
    j["reference_model"]["bm"] = matrix_to_json(scenario.ref.Bm);
    j["reference_model"]["cm"] = matrix_to_json(scenario.ref.Cm);
    if (scenario.ref.Lv)
        j["reference_model"]["lv"] = matrix_to_json(*scenario.ref.Lv);
    j["weights"]["gamma_pe"] = matrix_to_json(scenario.weights.gamma_pe);
    j["weights"]["gamma_ie"] = matrix_to_json(scenario.weights.gamma_ie);
    j["weights"]["gamma_px"] = matrix_to_json(scenario.weights.gamma_px);
    j["weights"]["gamma_ix"] = matrix_to_json(scenario.weights.gamma_ix);
    j["weights"]["gamma_pu"] = matrix_to_json(scenario.weights.gamma_pu);
    j["weights"]["gamma_iu"] = matrix_to_json(scenario.weights.gamma_iu);
    j["weights"]["sigma"] = scenario.weights.sigma;
    if (scenario.weights.leak_all)
        j["weights"]["leak_all"] = true;
    switch (scenario.command.kind) {
    case CommandKind::Step:
        j["command"]["kind"] = "step";
        break;
    case CommandKind::Square:
        j["command"]["kind"] = "square";
        j["command"]["period"] = scenario.command.period;
        break;
    case CommandKind::Constant:
        j["command"]["kind"] = "constant";
        break;
    }
    j["command"]["amplitude"] = scenario.command.amplitude;
    if (scenario.command.offset != 0.0)
        j["command"]["offset"] = scenario.command.offset;
    j["sim"]["dt"] = scenario.dt;
    j["sim"]["t_final"] = scenario.t_final;
    auto vector_to_json = [](const Vector& v) {
        json a = json::array();
        for (Eigen::Index i = 0; i < v.size(); ++i)
            a.push_back(v[i]);
        return a;
    };
    if (scenario.x_p0.size() > 0)
        j["initial"]["x_p"] = vector_to_json(scenario.x_p0);
    if (scenario.x_pfc0.size() > 0)
        j["initial"]["x_pfc"] = vector_to_json(scenario.x_pfc0);
    if (scenario.x_m0.size() > 0)
        j["initial"]["x_m"] = vector_to_json(scenario.x_m0);
    if (scenario.gains0) {
        j["initial"]["k_ie"] = matrix_to_json(scenario.gains0->K_Ie);
        j["initial"]["k_ix"] = matrix_to_json(scenario.gains0->K_Ix);
        j["initial"]["k_iu"] = matrix_to_json(scenario.gains0->K_Iu);
    }
    return j.dump(2) + "\n";
}

void save_scenario(const Scenario& scenario, const std::filesystem::path& path) {
    std::ofstream os(path);
    if (!os)
        throw IoError("cannot write config file: " + path.string());
    os << scenario_to_json_text(scenario);
    if (!os)
        throw IoError("write failed: " + path.string());
}

std::vector<std::string> export_default_scenarios(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec)
        throw IoError("cannot create directory: " + dir.string());

    const StateSpace lateral = scenarios::mav_lateral();
    const StateSpace actuator = scenarios::mav_actuator();
    const TransferFunction c_s = scenarios::pfc_stabilizer();

    auto make = [&](const std::string& name, std::optional<Scalar> lv) {
        json j;
        j["name"] = name;
        j["plant"]["a"] = matrix_to_json(lateral.A);
        j["plant"]["b"] = matrix_to_json(lateral.B);
        j["plant"]["c"] = matrix_to_json(lateral.C);
        j["plant"]["state_names"] = {"v", "p", "r", "phi"};
        j["actuator"]["a"] = matrix_to_json(actuator.A);
        j["actuator"]["b"] = matrix_to_json(actuator.B);
        j["actuator"]["c"] = matrix_to_json(actuator.C);
        j["actuator"]["state_names"] = {"delta_r", "delta_r_dot"};
        j["pfc"]["c_num"] = polynomial_to_json(c_s.num);
        j["pfc"]["c_den"] = polynomial_to_json(c_s.den);
        j["reference_model"]["am"] = {{-5.0}};
        j["reference_model"]["bm"] = {{5.0}};
        j["reference_model"]["cm"] = {{1.0}};
        if (lv)
            j["reference_model"]["lv"] = {{*lv}};
        for (const char* key : {"gamma_pe", "gamma_ie", "gamma_px", "gamma_ix", "gamma_pu",
                                "gamma_iu"})
            j["weights"][key] = {{10.0}};
        j["weights"]["sigma"] = 5.0;
        j["command"] = {{"kind", "square"}, {"amplitude", 0.1745}, {"period", 20.0}};
        j["sim"] = {{"dt", 1e-3}, {"t_final", 40.0}};
        return j;
    };

    std::vector<std::string> written;
    auto emit = [&](const std::string& name, std::optional<Scalar> lv) {
        const std::string file = name + ".json";
        std::ofstream os(dir / file);
        if (!os)
            throw IoError("cannot write config file: " + (dir / file).string());
        os << make(name, lv).dump(2) << "\n";
        if (!os)
            throw IoError("write failed: " + (dir / file).string());
        written.push_back(file);
    };

    emit("mav_sac", std::nullopt);
    emit("mav_clsac", 20.0);
    emit("mav_clsac_lv10", 10.0);
    emit("mav_clsac_lv50", 50.0);
    emit("mav_clsac_lv100", 100.0);
    return written;
}

std::string format_float(Scalar v) {
    if (v == 0.0)
        return "0"; // avoid printing negative zero
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

namespace {

void append_block_names(std::vector<std::string>& names, const std::string& base,
                        Eigen::Index rows, Eigen::Index cols) {
    if (rows * cols == 1) {
        names.push_back(base);
        return;
    }
    for (Eigen::Index r = 0; r < rows; ++r)
        for (Eigen::Index c = 0; c < cols; ++c)
            names.push_back(base + "_" + std::to_string(r) + "_" + std::to_string(c));
}

void append_signal_names(std::vector<std::string>& names, const std::string& base,
                         Eigen::Index dim) {
    if (dim == 1) {
        names.push_back(base);
        return;
    }
    for (Eigen::Index i = 0; i < dim; ++i)
        names.push_back(base + "_" + std::to_string(i));
}

} // namespace

void write_trace_csv(const SimTrace& trace, std::ostream& os, int decimate) {
    if (decimate < 1)
        throw std::invalid_argument("write_trace_csv: decimate must be >= 1");
    const Eigen::Index m = trace.y_p.cols();
    const Eigen::Index np = trace.x_p.cols();
    const Eigen::Index nd = trace.x_pfc.cols();
    const Eigen::Index nm = trace.x_m_ol.cols();

    std::vector<std::string> header{"t", "u_m"};
    append_signal_names(header, "y_m_ol", m);
    append_signal_names(header, "y_mo", m);
    append_signal_names(header, "y_p", m);
    append_signal_names(header, "y_aug", m);
    append_signal_names(header, "e", m);
    append_signal_names(header, "u_p", m);
    if (trace.state_names.size() == static_cast<size_t>(np)) {
        for (const auto& n : trace.state_names)
            header.push_back(n);
    } else {
        for (Eigen::Index i = 0; i < np; ++i)
            header.push_back("x_p_" + std::to_string(i));
    }
    append_signal_names(header, "x_pfc", nd);
    append_block_names(header, "k_pe", m, m);
    append_block_names(header, "k_ie", m, m);
    append_block_names(header, "k_px", m, nm);
    append_block_names(header, "k_ix", m, nm);
    append_block_names(header, "k_pu", m, trace.k_pu.cols() / m);
    append_block_names(header, "k_iu", m, trace.k_iu.cols() / m);

    for (size_t i = 0; i < header.size(); ++i)
        os << (i ? "," : "") << header[i];
    os << "\n";

    auto put_row = [&](std::ostream& o, const Matrix& mtx, Eigen::Index row) {
        for (Eigen::Index c = 0; c < mtx.cols(); ++c)
            o << "," << format_float(mtx(row, c));
    };

    for (Eigen::Index k = 0; k < trace.samples(); k += decimate) {
        os << format_float(trace.time[k]);
        put_row(os, trace.u_m, k);
        put_row(os, trace.y_m_ol, k);
        put_row(os, trace.y_mo, k);
        put_row(os, trace.y_p, k);
        put_row(os, trace.y_aug, k);
        put_row(os, trace.e, k);
        put_row(os, trace.u_p, k);
        put_row(os, trace.x_p, k);
        put_row(os, trace.x_pfc, k);
        put_row(os, trace.k_pe, k);
        put_row(os, trace.k_ie, k);
        put_row(os, trace.k_px, k);
        put_row(os, trace.k_ix, k);
        put_row(os, trace.k_pu, k);
        put_row(os, trace.k_iu, k);
        os << "\n";
    }
}

void write_trace_csv(const SimTrace& trace, const std::filesystem::path& path, int decimate) {
    std::ofstream os(path);
    if (!os)
        throw IoError("cannot write trace file: " + path.string());
    write_trace_csv(trace, os, decimate);
    if (!os)
        throw IoError("write failed: " + path.string());
}

Eigen::Index TraceTable::column(const std::string& name) const {
    for (size_t i = 0; i < columns.size(); ++i) {
        if (columns[i] == name)
            return static_cast<Eigen::Index>(i);
    }
    throw std::invalid_argument("trace table: no column named '" + name + "'");
}

TraceTable read_trace_csv(std::istream& is) {
    TraceTable table;
    std::string line;
    if (!std::getline(is, line))
        throw std::invalid_argument("trace CSV: empty input");
    std::stringstream header(line);
    std::string field;
    while (std::getline(header, field, ','))
        table.columns.push_back(field);

    std::vector<std::vector<Scalar>> rows;
    while (std::getline(is, line)) {
        if (line.empty())
            continue;
        std::vector<Scalar> row;
        row.reserve(table.columns.size());
        std::stringstream ss(line);
        while (std::getline(ss, field, ','))
            row.push_back(std::stod(field));
        if (row.size() != table.columns.size())
            throw std::invalid_argument("trace CSV: ragged row");
        rows.push_back(std::move(row));
    }
    table.data.resize(static_cast<Eigen::Index>(rows.size()),
                      static_cast<Eigen::Index>(table.columns.size()));
    for (Eigen::Index r = 0; r < table.data.rows(); ++r)
        for (Eigen::Index c = 0; c < table.data.cols(); ++c)
            table.data(r, c) = rows[static_cast<size_t>(r)][static_cast<size_t>(c)];
    return table;
}

TraceTable read_trace_csv(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is)
        throw IoError("cannot open trace file: " + path.string());
    return read_trace_csv(is);
}

void write_metrics(std::ostream& os, const std::string& scenario, const std::string& controller,
                   const Metrics& m) {
    os << "scenario = " << scenario << "\n"
       << "controller = " << controller << "\n"
       << "rms_tracking_error = " << format_float(m.rms_tracking_error) << "\n"
       << "rms_model_error = " << format_float(m.rms_model_error) << "\n"
       << "control_energy = " << format_float(m.control_energy) << "\n"
       << "control_total_variation = " << format_float(m.control_total_variation) << "\n"
       << "peak_u = " << format_float(m.peak_u) << "\n";
}

} // namespace sac
