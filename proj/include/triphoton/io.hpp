#pragma once

// Flat key=value configuration parsing and delimited-text output: per-series
// CSV files, Wigner grids, and a manifest that parse_config reads back
// unchanged.

#include <charconv>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "triphoton/common.hpp"
#include "triphoton/dynamics.hpp"
#include "triphoton/scenarios.hpp"
#include "triphoton/wigner.hpp"

namespace triphoton {

inline constexpr const char* tool_version = "1.0.0";

struct io_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParsedConfig {
    SystemConfig config;
    TimeGrid grid;  // zero fields mean "use the scenario default"
    std::string scenario = "closed-ground";
    std::optional<SweepSpec> sweep;
    double grid_extent = 4.0;
    int grid_points = 101;

    PhaseSpaceGrid snapshot_grid() const { return PhaseSpaceGrid::square(grid_extent, grid_points); }
    ScenarioOptions options() const {
        ScenarioOptions opts;
        opts.snapshot_grid = snapshot_grid();
        if (grid.t_end > 0.0) opts.t_end = grid.t_end;
        if (grid.dt_sample > 0.0) opts.dt_sample = grid.dt_sample;
        return opts;
    }
};

// Locale-independent decimal at 15 significant digits (data files).
inline std::string format_double(double value) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 15);
    return std::string(buf, res.ptr);
}

// Shortest representation that parses back to the identical double; used in
// the manifest so a re-run resolves bit-identical inputs.
inline std::string format_double_exact(double value) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

inline double parse_number(std::string_view value, const std::string& key) {
    double out{};
    auto res = std::from_chars(value.data(), value.data() + value.size(), out);
    if (res.ec != std::errc{} || res.ptr != value.data() + value.size())
        throw validation_error("config key '" + key + "': invalid numeric value '" +
                               std::string(value) + "'");
    return out;
}

inline int parse_integer(std::string_view value, const std::string& key) {
    int out{};
    auto res = std::from_chars(value.data(), value.data() + value.size(), out);
    if (res.ec != std::errc{} || res.ptr != value.data() + value.size())
        throw validation_error("config key '" + key + "': invalid integer value '" +
                               std::string(value) + "'");
    return out;
}

inline std::vector<double> parse_number_list(std::string_view value, const std::string& key) {
    std::vector<double> out;
    size_t start = 0;
    while (start <= value.size()) {
        size_t comma = value.find(',', start);
        std::string_view tok =
            trim(value.substr(start, comma == std::string_view::npos ? comma : comma - start));
        if (tok.empty())
            throw validation_error("config key '" + key + "': empty entry in list");
        out.push_back(parse_number(tok, key));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

inline const char* valid_keys_note() {
    return "valid keys: g, omega_a, omega_sigma, pump, kappa, beta_re, beta_im, theta, n_max, "
           "t_end, dt_sample, scenario, sweep_param, sweep_values, grid_extent, grid_points";
}

}  // namespace detail

inline ParsedConfig parse_config_text(const std::string& text) {
    ParsedConfig parsed;
    double beta_re = 0.9, beta_im = 0.0;
    std::optional<SweepParameter> sweep_param;
    std::optional<std::vector<double>> sweep_values;

    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line(raw);
        if (size_t hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        size_t eq = line.find('=');
        if (eq == std::string_view::npos)
            throw validation_error("config line " + std::to_string(line_no) +
                                   ": expected 'key = value'");
        std::string key(detail::trim(line.substr(0, eq)));
        std::string_view value = detail::trim(line.substr(eq + 1));
        if (value.empty())
            throw validation_error("config key '" + key + "': missing value");

        if (key == "g") parsed.config.g = detail::parse_number(value, key);
        else if (key == "omega_a") parsed.config.omega_a = detail::parse_number(value, key);
        else if (key == "omega_sigma") parsed.config.omega_sigma = detail::parse_number(value, key);
        else if (key == "pump") parsed.config.pump_P = detail::parse_number(value, key);
        else if (key == "kappa") parsed.config.kappa = detail::parse_number(value, key);
        else if (key == "beta_re") beta_re = detail::parse_number(value, key);
        else if (key == "beta_im") beta_im = detail::parse_number(value, key);
        else if (key == "theta") parsed.config.theta = detail::parse_number(value, key);
        else if (key == "n_max") parsed.config.cutoff = FockCutoff(detail::parse_integer(value, key));
        else if (key == "t_end") parsed.grid.t_end = detail::parse_number(value, key);
        else if (key == "dt_sample") parsed.grid.dt_sample = detail::parse_number(value, key);
        else if (key == "scenario") parsed.scenario = std::string(value);
        else if (key == "sweep_param") {
            if (value == "pump") sweep_param = SweepParameter::pump_P;
            else if (value == "kappa") sweep_param = SweepParameter::kappa;
            else throw validation_error("config key 'sweep_param': expected 'pump' or 'kappa'");
        } else if (key == "sweep_values") sweep_values = detail::parse_number_list(value, key);
        else if (key == "grid_extent") parsed.grid_extent = detail::parse_number(value, key);
        else if (key == "grid_points") parsed.grid_points = detail::parse_integer(value, key);
        else throw validation_error("unknown config key '" + key + "'; " + detail::valid_keys_note());
    }

    parsed.config.beta = cplx(beta_re, beta_im);
    if (std::abs(parsed.config.beta) > 1.0 + 1e-12)
        throw validation_error("config key 'beta': |beta| = " +
                               format_double(std::abs(parsed.config.beta)) + " exceeds 1");
    if (parsed.config.g <= 0.0) throw validation_error("config key 'g': coupling must be positive");
    if (parsed.config.pump_P < 0.0)
        throw validation_error("config key 'pump': rate must be non-negative");
    if (parsed.config.kappa < 0.0)
        throw validation_error("config key 'kappa': rate must be non-negative");
    if (parsed.config.cutoff.n_max < 5)
        throw validation_error("config key 'n_max': need n_max >= 5 to resolve the |3> support");
    if (parsed.grid.t_end < 0.0)
        throw validation_error("config key 't_end': duration must be non-negative");
    if (parsed.grid.dt_sample < 0.0)
        throw validation_error("config key 'dt_sample': sampling step must be non-negative");
    if (parsed.grid_extent <= 0.0)
        throw validation_error("config key 'grid_extent': extent must be positive");
    if (parsed.grid_points < 2)
        throw validation_error("config key 'grid_points': need at least 2 points per axis");
    if (parsed.scenario != "closed-ground" && parsed.scenario != "closed-excited" &&
        parsed.scenario != "closed" && parsed.scenario != "dissipative")
        throw validation_error("config key 'scenario': expected one of closed-ground, "
                               "closed-excited, closed, dissipative");
    if (sweep_param.has_value() != sweep_values.has_value())
        throw validation_error("config: sweep_param and sweep_values must be given together");
    if (sweep_param) {
        SweepSpec sweep;
        sweep.parameter = *sweep_param;
        sweep.values = *sweep_values;
        parsed.sweep = sweep;
    }
    parsed.config.validate();
    return parsed;
}

inline ParsedConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw validation_error("config file not found or unreadable: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config_text(buffer.str());
}

namespace detail {

inline std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot open '" + path + "' for writing");
    return out;
}

inline void finish_output(std::ofstream& out, const std::string& path) {
    out.flush();
    if (!out) throw io_error("write failed for '" + path + "'");
}

}  // namespace detail

inline std::string write_series_file(const TimeSeries& series, const std::string& path) {
    std::ofstream out = detail::open_output(path);
    out << "# series = " << series.label
        << "; columns = time,value; time and rates in units where g sets the scale "
           "(dimensionless)\n";
    for (size_t i = 0; i < series.times.size(); ++i)
        out << format_double(series.times[i]) << ',' << format_double(series.values[i]) << '\n';
    detail::finish_output(out, path);
    return path;
}

inline std::vector<std::string> write_timeseries(const ScenarioResult& result,
                                                 const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    std::vector<std::string> written;
    for (const auto& [label, series] : result.series)
        written.push_back(write_series_file(series, dir + "/" + label + ".csv"));
    return written;
}

inline std::string write_wigner(const WignerGrid& wigner, const std::string& path) {
    std::ofstream out = detail::open_output(path);
    const PhaseSpaceGrid& g = wigner.grid;
    out << "# wigner W(x,p); columns = x,p,W; x in [" << format_double(g.x_min) << ","
        << format_double(g.x_max) << "] n_x = " << g.n_x << "; p in [" << format_double(g.p_min)
        << "," << format_double(g.p_max) << "] n_p = " << g.n_p
        << "; evaluation cutoff = " << wigner.evaluation_cutoff
        << "; convention W = 2 Tr[D^-1 rho D parity], integrates to pi\n";
    std::vector<double> xs = g.xs(), ps = g.ps();
    for (int i = 0; i < g.n_x; ++i)
        for (int j = 0; j < g.n_p; ++j)
            out << format_double(xs[i]) << ',' << format_double(ps[j]) << ','
                << format_double(wigner.values(i, j)) << '\n';
    detail::finish_output(out, path);
    return path;
}

// Comment lines carry provenance and diagnostics; the uncommented remainder
// is a config file that parse_config resolves to the run's exact inputs.
inline std::string write_manifest(const ParsedConfig& resolved, const ScenarioResult& result,
                                  const std::string& path) {
    std::ofstream out = detail::open_output(path);
    out << "# triphoton run manifest\n";
    out << "# tool_version = " << tool_version << "\n";
    out << "# wall_time_seconds = " << format_double(result.wall_seconds) << "\n";
    out << "# max_trace_drift = " << format_double(result.diagnostics.max_trace_drift) << "\n";
    out << "# max_hermiticity_residue = "
        << format_double(result.diagnostics.max_hermiticity_residue) << "\n";
    out << "# min_eigenvalue = " << format_double(result.diagnostics.min_eigenvalue) << "\n";
    const SystemConfig& c = result.config;
    out << "g = " << format_double_exact(c.g) << "\n";
    out << "omega_a = " << format_double_exact(c.omega_a) << "\n";
    out << "omega_sigma = " << format_double_exact(c.omega_sigma) << "\n";
    out << "pump = " << format_double_exact(c.pump_P) << "\n";
    out << "kappa = " << format_double_exact(c.kappa) << "\n";
    out << "beta_re = " << format_double_exact(c.beta.real()) << "\n";
    out << "beta_im = " << format_double_exact(c.beta.imag()) << "\n";
    out << "theta = " << format_double_exact(c.theta) << "\n";
    out << "n_max = " << c.cutoff.n_max << "\n";
    out << "t_end = " << format_double_exact(result.grid.t_end) << "\n";
    out << "dt_sample = " << format_double_exact(result.grid.dt_sample) << "\n";
    out << "scenario = " << resolved.scenario << "\n";
    if (resolved.sweep) {
        out << "sweep_param = "
            << (resolved.sweep->parameter == SweepParameter::pump_P ? "pump" : "kappa") << "\n";
        out << "sweep_values = ";
        for (size_t i = 0; i < resolved.sweep->values.size(); ++i)
            out << (i ? "," : "") << format_double_exact(resolved.sweep->values[i]);
        out << "\n";
    }
    out << "grid_extent = " << format_double_exact(resolved.grid_extent) << "\n";
    out << "grid_points = " << resolved.grid_points << "\n";
    detail::finish_output(out, path);
    return path;
}

}  // namespace triphoton
