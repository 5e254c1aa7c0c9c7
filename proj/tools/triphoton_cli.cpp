// Command-line front end: evolve | wigner | sweep | steady | check.
// Exit codes: 0 success, 1 usage error, 2 validation error, 3 invariant
// violation.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "triphoton/io.hpp"
#include "triphoton/scenarios.hpp"
#include "triphoton/selftest.hpp"

namespace {

using namespace triphoton;

std::string short_number(double value) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", value);
    return buf;
}

ScenarioResult dispatch_scenario(const ParsedConfig& parsed) {
    ScenarioOptions opts = parsed.options();
    if (parsed.scenario == "closed-ground") return run_closed_ground(parsed.config, opts);
    if (parsed.scenario == "closed-excited") return run_closed_excited(parsed.config, opts);
    if (parsed.scenario == "closed")
        return run_entanglement_closed(parsed.config.theta, parsed.config, opts);
    if (parsed.scenario == "dissipative") return run_dissipative(parsed.config, opts);
    throw validation_error("unknown scenario '" + parsed.scenario +
                           "'; expected closed-ground, closed-excited, closed, dissipative");
}

void write_result(const ParsedConfig& parsed, const ScenarioResult& result,
                  const std::string& dir) {
    std::filesystem::create_directories(dir);
    write_timeseries(result, dir);
    for (const auto& [t, snap] : result.snapshots)
        write_wigner(snap.wigner, dir + "/wigner_t" + short_number(t) + ".csv");
    ParsedConfig echo = parsed;
    echo.grid = result.grid;
    write_manifest(echo, result, dir + "/manifest.txt");
}

void print_result_summary(const ScenarioResult& result) {
    std::cout << "scenario " << result.name << ": " << result.series.at("beta").times.size()
              << " samples, wall " << short_number(result.wall_seconds) << " s\n";
    std::cout << "  diagnostics: max trace drift "
              << short_number(result.diagnostics.max_trace_drift) << ", max hermiticity residue "
              << short_number(result.diagnostics.max_hermiticity_residue) << ", min eigenvalue "
              << short_number(result.diagnostics.min_eigenvalue) << "\n";
    if (result.sudden_death)
        std::cout << "  sudden death: " << result.sudden_death->dead_intervals.size()
                  << " dead interval(s), " << result.sudden_death->revival_count << " revival(s)\n";
    if (result.steady_negativity)
        std::cout << "  steady-state negativity " << short_number(*result.steady_negativity)
                  << ", final-state distance " << short_number(*result.steady_state_distance)
                  << "\n";
}

int cmd_evolve(const ParsedConfig& parsed, std::string out) {
    ScenarioResult result = dispatch_scenario(parsed);
    if (out.empty()) out = "out/" + parsed.scenario;
    write_result(parsed, result, out);
    print_result_summary(result);
    std::cout << "wrote " << out << "\n";
    return 0;
}

DensityMatrix state_for_wigner(const std::string& name, const ParsedConfig& parsed) {
    FockCutoff cutoff = parsed.config.cutoff;
    if (name == "vacuum") return density(fock_state(0, cutoff));
    if (name == "three-photon") return density(three_photon_state(parsed.config.beta, cutoff));
    if (name.rfind("fock:", 0) == 0)
        return density(fock_state(detail::parse_integer(name.substr(5), "state"), cutoff));
    if (name.rfind("evolved:", 0) == 0) {
        double t = detail::parse_number(name.substr(8), "state");
        if (t < 0.0) throw validation_error("state 'evolved:T': time must be non-negative");
        DensityMatrix rho0 = initial_condition(parsed.config.theta, parsed.config.beta, cutoff);
        if (t == 0.0) return partial_trace(rho0, Space::field);
        TimeGrid grid{0.0, t, t};
        Trajectory traj = evolve(rho0, parsed.config, grid);
        return partial_trace(traj.states.back(), Space::field);
    }
    throw validation_error("unknown state '" + name +
                           "'; expected vacuum, three-photon, fock:N, evolved:T");
}

int cmd_wigner(const ParsedConfig& parsed, const std::string& state, std::string out) {
    DensityMatrix rho = state_for_wigner(state, parsed);
    WignerGrid grid = wigner_grid(rho, parsed.snapshot_grid());
    if (out.empty()) out = "out/wigner.csv";
    if (auto dir = std::filesystem::path(out).parent_path(); !dir.empty())
        std::filesystem::create_directories(dir);
    write_wigner(grid, out);
    std::cout << "wigner grid " << grid.grid.n_x << "x" << grid.grid.n_p << ", evaluation cutoff "
              << grid.evaluation_cutoff << ", integral " << short_number(grid.integral())
              << ", wrote " << out << "\n";
    return 0;
}

int cmd_sweep(const ParsedConfig& parsed, std::string out) {
    if (!parsed.sweep)
        throw validation_error(
            "sweep needs --param/--values or sweep_param/sweep_values in the config");
    ScenarioSpec spec;
    spec.name = "sweep";
    spec.config = parsed.config;
    spec.grid = parsed.grid;
    spec.sweep = parsed.sweep;
    ScenarioOptions opts = parsed.options();
    opts.with_snapshots = false;
    std::vector<ScenarioResult> results = run_dissipative_sweep(spec, opts);

    if (out.empty()) out = "out/sweep";
    std::filesystem::create_directories(out);
    std::string summary_path = out + "/summary.csv";
    std::ofstream summary(summary_path);
    if (!summary) throw io_error("cannot open '" + summary_path + "' for writing");
    summary << "# columns = value,revival_count,peak_negativity,peak_time,steady_negativity,"
               "final_state_distance\n";
    for (size_t i = 0; i < results.size(); ++i) {
        const ScenarioResult& r = results[i];
        double value = parsed.sweep->values[i];
        std::string member_dir =
            out + "/" +
            (parsed.sweep->parameter == SweepParameter::pump_P ? "pump_" : "kappa_") +
            short_number(value);
        ParsedConfig echo = parsed;
        echo.config = r.config;
        write_result(echo, r, member_dir);
        PeakEstimate peak = peak_estimate(r.series.at("negativity"));
        summary << format_double(value) << ',' << r.sudden_death->revival_count << ','
                << format_double(peak.value) << ',' << format_double(peak.t) << ','
                << format_double(r.steady_negativity.value_or(0.0)) << ','
                << format_double(r.steady_state_distance.value_or(0.0)) << '\n';
        print_result_summary(r);
    }
    summary.flush();
    if (!summary) throw io_error("write failed for '" + summary_path + "'");
    std::cout << "wrote " << summary_path << "\n";
    return 0;
}

int cmd_steady(const ParsedConfig& parsed) {
    DensityMatrix steady = steady_state(parsed.config);
    if (!steady.warning.empty()) std::cout << "warning: " << steady.warning << "\n";
    std::cout << "steady-state negativity " << format_double(negativity(steady)) << "\n";
    DensityMatrix qubit = partial_trace(steady, Space::qubit);
    std::cout << "qubit populations: ground " << format_double(qubit.entries(0, 0).real())
              << ", excited " << format_double(qubit.entries(1, 1).real()) << "\n";
    DensityMatrix field = partial_trace(steady, Space::field);
    std::cout << "field populations:";
    for (int n = 0; n < std::min(field.dim, 8); ++n)
        std::cout << " p" << n << "=" << format_double(field.entries(n, n).real());
    std::cout << "\n";
    return 0;
}

int cmd_check() {
    bool ok = selftest::run_all(std::cout);
    std::cout << (ok ? "self-test suite passed\n" : "self-test suite FAILED\n");
    return ok ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"three-photon superposition in a pumped, lossy cavity: simulator front end"};
    app.require_subcommand(1);

    std::string config_path, out, scenario, state = "three-photon", param;
    std::vector<double> values;
    double extent = 0.0;
    int points = 0;

    CLI::App* evolve_cmd =
        app.add_subcommand("evolve", "run one scenario; write time series, snapshots, manifest");
    evolve_cmd->add_option("--config", config_path, "key = value configuration file");
    evolve_cmd->add_option("--out", out, "output directory (default out/<scenario>)");
    evolve_cmd->add_option("--scenario", scenario,
                           "closed-ground | closed-excited | closed | dissipative");

    CLI::App* wigner_cmd =
        app.add_subcommand("wigner", "render the Wigner function of a named state to CSV");
    wigner_cmd->add_option("--config", config_path, "key = value configuration file");
    wigner_cmd->add_option("--out", out, "output file (default out/wigner.csv)");
    wigner_cmd->add_option("--state", state, "vacuum | three-photon | fock:N | evolved:T");
    wigner_cmd->add_option("--extent", extent, "phase-space half-width");
    wigner_cmd->add_option("--points", points, "grid points per axis");

    CLI::App* sweep_cmd =
        app.add_subcommand("sweep", "run a dissipative parameter sweep with per-member outputs");
    sweep_cmd->add_option("--config", config_path, "key = value configuration file");
    sweep_cmd->add_option("--out", out, "output directory (default out/sweep)");
    sweep_cmd->add_option("--param", param, "swept parameter")
        ->check(CLI::IsMember({"pump", "kappa"}));
    sweep_cmd->add_option("--values", values, "comma-separated sweep values")->delimiter(',');

    CLI::App* steady_cmd =
        app.add_subcommand("steady", "print the steady-state negativity and populations");
    steady_cmd->add_option("--config", config_path, "key = value configuration file");

    CLI::App* check_cmd = app.add_subcommand("check", "run the invariant self-test suite");
    (void)check_cmd;

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        ParsedConfig parsed;
        if (!config_path.empty()) parsed = parse_config(config_path);
        if (!scenario.empty()) parsed.scenario = scenario;
        if (wigner_cmd->count("--extent") > 0) parsed.grid_extent = extent;
        if (wigner_cmd->count("--points") > 0) parsed.grid_points = points;
        if (!param.empty() || !values.empty()) {
            if (param.empty() || values.empty())
                throw validation_error("sweep needs both --param and --values");
            SweepSpec sweep;
            sweep.parameter = param == "pump" ? SweepParameter::pump_P : SweepParameter::kappa;
            sweep.values = values;
            parsed.sweep = sweep;
        }

        if (evolve_cmd->parsed()) return cmd_evolve(parsed, out);
        if (wigner_cmd->parsed()) return cmd_wigner(parsed, state, out);
        if (sweep_cmd->parsed()) return cmd_sweep(parsed, out);
        if (steady_cmd->parsed()) return cmd_steady(parsed);
        return cmd_check();
    } catch (const invariant_violation& e) {
        std::cerr << "invariant violation: " << e.what() << "\n";
        return 3;
    } catch (const validation_error& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
