#pragma once

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>

#include "sacsim/sim_engine.hpp"

namespace sac {

// JSON syntax or schema problem in a scenario config (CLI exit code 2).
class ConfigParseError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Filesystem problem reading or writing artifacts (CLI exit code 5).
class IoError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Scenario config: JSON with sections plant, actuator (optional, composed in
// series ahead of the plant), pfc (optional, the stabilizer C(s)),
// reference_model (keys am, bm, cm, lv), weights, command, sim, initial.
// Matrices are nested row-major arrays; 1x1 blocks may be plain numbers.
Scenario load_scenario(const std::filesystem::path& path);
Scenario scenario_from_json_text(const std::string& text, const std::string& default_name = "");

std::string scenario_to_json_text(const Scenario& scenario);
void save_scenario(const Scenario& scenario, const std::filesystem::path& path);

// Writes the built-in scenario configs (lateral plant and actuator kept as
// separate sections, as printed) into dir. Returns the file names written.
std::vector<std::string> export_default_scenarios(const std::filesystem::path& dir);

// Trace CSV: one row per kept grid point, floats printed with 9 significant
// digits. Plant-state columns use trace.state_names when present.
void write_trace_csv(const SimTrace& trace, std::ostream& os, int decimate = 1);
void write_trace_csv(const SimTrace& trace, const std::filesystem::path& path, int decimate = 1);

struct TraceTable {
    std::vector<std::string> columns;
    Matrix data; // rows x columns

    Eigen::Index column(const std::string& name) const; // throws if absent
};

TraceTable read_trace_csv(std::istream& is);
TraceTable read_trace_csv(const std::filesystem::path& path);

void write_metrics(std::ostream& os, const std::string& scenario, const std::string& controller,
                   const Metrics& m);

std::string format_float(Scalar v); // %.9g, shared by all emitters

} // namespace sac
