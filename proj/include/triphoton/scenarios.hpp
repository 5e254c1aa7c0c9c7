#pragma once

// Named experiment presets: closed-cavity runs from the ground and excited
// dot states, the entanglement time-series run, and dissipative runs with
// pump or leakage sweeps, sudden-death analysis, and steady-state comparison.

#include <chrono>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "triphoton/common.hpp"
#include "triphoton/dynamics.hpp"
#include "triphoton/hilbert.hpp"
#include "triphoton/measures.hpp"
#include "triphoton/wigner.hpp"

namespace triphoton {

enum class SweepParameter { pump_P, kappa };

struct SweepSpec {
    SweepParameter parameter = SweepParameter::pump_P;
    std::vector<double> values;
};

struct ScenarioSpec {
    std::string name;
    SystemConfig config;
    TimeGrid grid;  // t_end == 0 lets the runner pick the scenario default
    std::vector<double> snapshot_times;
    std::optional<SweepSpec> sweep;

    void validate() const {
        if (grid.t_end > 0.0) {
            grid.validate();
            for (double ts : snapshot_times)
                if (ts < grid.t_start - 1e-12 || ts > grid.t_end + 1e-12)
                    throw validation_error("ScenarioSpec: snapshot time outside the time grid");
        }
        if (sweep) {
            if (sweep->values.empty())
                throw validation_error("ScenarioSpec: sweep values must be non-empty");
            for (size_t i = 0; i < sweep->values.size(); ++i) {
                if (sweep->values[i] < 0.0)
                    throw validation_error("ScenarioSpec: sweep values must be non-negative");
                if (i > 0 && !(sweep->values[i] > sweep->values[i - 1]))
                    throw validation_error("ScenarioSpec: sweep values must be strictly increasing");
            }
        }
    }
};

struct Snapshot {
    WignerGrid wigner;
    RVec populations;
};

struct RunDiagnostics {
    double max_trace_drift = 0.0;
    double max_hermiticity_residue = 0.0;
    double min_eigenvalue = 1.0;
};

struct ScenarioResult {
    std::string name;
    SystemConfig config;
    TimeGrid grid;
    std::map<std::string, TimeSeries> series;
    std::map<double, Snapshot> snapshots;
    std::optional<SuddenDeathReport> sudden_death;
    std::optional<double> steady_negativity;
    std::optional<double> steady_state_distance;
    DensityMatrix final_state;
    RunDiagnostics diagnostics;
    double wall_seconds = 0.0;
};

struct ScenarioOptions {
    bool with_snapshots = true;            // closed scenarios only, unless times are given
    std::vector<double> snapshot_times;    // empty = scenario default
    PhaseSpaceGrid snapshot_grid{};
    std::optional<double> t_end;
    std::optional<double> dt_sample;
    double sudden_death_tol = 1e-6;
    bool with_steady_comparison = true;    // dissipative scenarios
};

namespace detail {

inline ScenarioResult run_time_evolution(std::string name, const SystemConfig& config,
                                         const TimeGrid& grid,
                                         const std::vector<double>& snapshot_times,
                                         const PhaseSpaceGrid& snapshot_grid) {
    auto clock_start = std::chrono::steady_clock::now();
    ScenarioResult result;
    result.name = std::move(name);
    result.config = config;
    result.grid = grid;

    const int n_samples = grid.n_samples();
    std::vector<int> snap_index;
    for (double ts : snapshot_times) {
        long long k = std::llround((ts - grid.t_start) / grid.dt_sample);
        if (k < 0 || k >= n_samples ||
            std::abs(grid.t_start + k * grid.dt_sample - ts) > 0.5 * grid.dt_sample)
            throw validation_error("scenario: snapshot time does not lie on the sampling grid");
        snap_index.push_back(static_cast<int>(k));
    }

    std::vector<double> times;
    std::vector<double> s_beta, s_neg, s_ent, s_drift, s_purity;
    std::vector<double> s_pop[5];
    times.reserve(n_samples);
    s_beta.reserve(n_samples);
    s_neg.reserve(n_samples);
    s_ent.reserve(n_samples);
    s_drift.reserve(n_samples);
    s_purity.reserve(n_samples);
    for (auto& p : s_pop) p.reserve(n_samples);

    DensityMatrix rho0 = initial_condition(config.theta, config.beta, config.cutoff);

    evolve_observe(rho0, config, grid, [&](int idx, double t, const Mat& state) {
        DensityMatrix joint(Space::joint, state);
        DensityMatrix field = partial_trace(joint, Space::field);
        times.push_back(t);
        s_beta.push_back(extract_beta(field));
        s_neg.push_back(negativity(joint));
        s_ent.push_back(linear_entropy(joint));
        for (int k = 0; k < 5; ++k) s_pop[k].push_back(field.entries(k, k).real());
        double drift = joint.trace_error();
        s_drift.push_back(drift);
        Mat herm = 0.5 * (state + state.adjoint());
        s_purity.push_back(herm.squaredNorm());
        double hres = joint.hermiticity_residue();
        double mineig = joint.min_eigenvalue();
        result.diagnostics.max_trace_drift = std::max(result.diagnostics.max_trace_drift, drift);
        result.diagnostics.max_hermiticity_residue =
            std::max(result.diagnostics.max_hermiticity_residue, hres);
        result.diagnostics.min_eigenvalue = std::min(result.diagnostics.min_eigenvalue, mineig);
        for (size_t s = 0; s < snap_index.size(); ++s)
            if (snap_index[s] == idx) {
                Snapshot snap;
                snap.wigner = wigner_grid(field, snapshot_grid);
                snap.populations = field.entries.diagonal().real();
                result.snapshots.emplace(snapshot_times[s], std::move(snap));
            }
        if (idx == n_samples - 1) result.final_state = joint;
    });

    result.series.emplace("beta", TimeSeries(times, s_beta, "beta"));
    result.series.emplace("negativity", TimeSeries(times, s_neg, "negativity"));
    result.series.emplace("linear_entropy", TimeSeries(times, s_ent, "linear_entropy"));
    for (int k = 0; k < 5; ++k) {
        std::string label = "pop_" + std::to_string(k);
        result.series.emplace(label, TimeSeries(times, s_pop[k], label));
    }
    result.series.emplace("trace_drift", TimeSeries(times, s_drift, "trace_drift"));
    result.series.emplace("purity", TimeSeries(times, s_purity, "purity"));

    result.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - clock_start).count();
    return result;
}

inline TimeGrid closed_grid(double period, const ScenarioOptions& opts) {
    TimeGrid grid;
    grid.t_end = opts.t_end.value_or(3.0 * period);
    grid.dt_sample = opts.dt_sample.value_or(period / 400.0);
    return grid;
}

inline std::vector<double> closed_snapshot_times(double period, const TimeGrid& grid,
                                                 const ScenarioOptions& opts) {
    if (!opts.with_snapshots) return {};
    if (!opts.snapshot_times.empty()) return opts.snapshot_times;
    std::vector<double> ts;
    for (double t : {0.0, 0.5 * period, period})
        if (t <= grid.t_end + 1e-12) ts.push_back(t);
    return ts;
}

inline void require_closed(const SystemConfig& config, const char* who) {
    if (config.pump_P != 0.0 || config.kappa != 0.0)
        throw validation_error(std::string(who) + ": requires pump = kappa = 0");
}

}  // namespace detail

// Ground-state dot, default field superposition; period pi/(g sqrt(3)) from
// the three-excitation manifold. Snapshots default to {0, T/2, T}.
inline ScenarioResult run_closed_ground(SystemConfig config = {}, ScenarioOptions opts = {}) {
    detail::require_closed(config, "run_closed_ground");
    config.theta = 0.0;
    double period = pi / (config.g * std::sqrt(3.0));
    TimeGrid grid = detail::closed_grid(period, opts);
    return detail::run_time_evolution("closed-ground", config, grid,
                                      detail::closed_snapshot_times(period, grid, opts),
                                      opts.snapshot_grid);
}

// Excited dot; the one- and four-excitation manifolds beat commensurately
// with period pi/g.
inline ScenarioResult run_closed_excited(SystemConfig config = {}, ScenarioOptions opts = {}) {
    detail::require_closed(config, "run_closed_excited");
    config.theta = 0.5 * pi;
    double period = pi / config.g;
    TimeGrid grid = detail::closed_grid(period, opts);
    return detail::run_time_evolution("closed-excited", config, grid,
                                      detail::closed_snapshot_times(period, grid, opts),
                                      opts.snapshot_grid);
}

// Entanglement-series run over >= 3 periods of the dominant manifold; no
// snapshots by default.
inline ScenarioResult run_entanglement_closed(double theta, SystemConfig config = {},
                                              ScenarioOptions opts = {}) {
    detail::require_closed(config, "run_entanglement_closed");
    config.theta = theta;
    double c2 = std::cos(theta) * std::cos(theta);
    double period = c2 >= 0.5 ? pi / (config.g * std::sqrt(3.0)) : pi / config.g;
    TimeGrid grid = detail::closed_grid(period, opts);
    std::vector<double> snaps = opts.snapshot_times;
    return detail::run_time_evolution("closed", config, grid, snaps, opts.snapshot_grid);
}

// Open-cavity run: duration 20 max(1/kappa, 1/P) over the active channels,
// sudden-death report on the negativity series, and comparison of the final
// state against the Liouvillian steady state.
inline ScenarioResult run_dissipative(SystemConfig config, ScenarioOptions opts = {}) {
    if (config.pump_P <= 0.0 && config.kappa <= 0.0)
        throw validation_error("run_dissipative: requires pump > 0 or kappa > 0");
    double slowest = 0.0;
    if (config.kappa > 0.0) slowest = std::max(slowest, 1.0 / config.kappa);
    if (config.pump_P > 0.0) slowest = std::max(slowest, 1.0 / config.pump_P);
    TimeGrid grid;
    grid.t_end = opts.t_end.value_or(20.0 * slowest);
    grid.dt_sample = opts.dt_sample.value_or(0.002);
    ScenarioResult result = detail::run_time_evolution("dissipative", config, grid,
                                                       opts.snapshot_times, opts.snapshot_grid);
    result.sudden_death =
        sudden_death_report(result.series.at("negativity"), opts.sudden_death_tol);
    if (opts.with_steady_comparison) {
        DensityMatrix steady = steady_state(config);
        result.steady_negativity = negativity(steady);
        result.steady_state_distance = trace_distance(result.final_state, steady);
    }
    return result;
}

// One dissipative run per sweep value; spec.grid supplies optional duration
// and sampling overrides shared by all members.
inline std::vector<ScenarioResult> run_dissipative_sweep(const ScenarioSpec& spec,
                                                         ScenarioOptions opts = {}) {
    spec.validate();
    if (!spec.sweep)
        throw validation_error("run_dissipative_sweep: spec must carry exactly one sweep parameter");
    if (spec.grid.t_end > 0.0) opts.t_end = spec.grid.t_end;
    if (spec.grid.dt_sample > 0.0) opts.dt_sample = spec.grid.dt_sample;
    if (!spec.snapshot_times.empty()) opts.snapshot_times = spec.snapshot_times;
    std::vector<ScenarioResult> results;
    results.reserve(spec.sweep->values.size());
    for (double value : spec.sweep->values) {
        SystemConfig config = spec.config;
        if (spec.sweep->parameter == SweepParameter::pump_P)
            config.pump_P = value;
        else
            config.kappa = value;
        ScenarioResult r = run_dissipative(config, opts);
        std::string tag = spec.sweep->parameter == SweepParameter::pump_P ? "pump" : "kappa";
        r.name = (spec.name.empty() ? std::string("sweep") : spec.name) + "-" + tag + "-" +
                 std::to_string(value);
        results.push_back(std::move(r));
    }
    return results;
}

}  // namespace triphoton
