// End-to-end acceptance runs over the full-scale configurations. Each
// criterion prints exactly one [PASS]/[FAIL] line; the exit code is the
// number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "triphoton/measures.hpp"
#include "triphoton/scenarios.hpp"
#include "triphoton/selftest.hpp"

using namespace triphoton;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

int g_failures = 0;

void run_criterion(int id, const char* title, const std::function<Outcome()>& body) {
    auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
        outcome = body();
    } catch (const std::exception& e) {
        outcome.pass = false;
        outcome.detail = std::string("exception: ") + e.what();
    }
    double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("[%s] %2d %-34s (%6.2f s)  %s\n", outcome.pass ? "PASS" : "FAIL", id, title,
                seconds, outcome.detail.c_str());
    std::fflush(stdout);
    if (!outcome.pass) ++g_failures;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

int nearest_offset(const std::vector<int>& candidates, int target) {
    int best_d = 1 << 30;
    for (int c : candidates) best_d = std::min(best_d, std::abs(c - target));
    return best_d;
}

}  // namespace

int main() {
    const double ground_period = pi / (10.0 * std::sqrt(3.0));
    const double excited_period = pi / 10.0;

    std::vector<const ScenarioResult*> all_runs;
    ScenarioResult ground, excited;
    std::vector<ScenarioResult> kappa_runs;
    std::vector<ScenarioResult> pump_runs;
    ScenarioResult relax_ground, relax_excited;

    run_criterion(1, "closed period, ground init", [&] {
        ScenarioOptions opts;
        opts.with_snapshots = false;
        ground = run_closed_ground(SystemConfig{}, opts);
        all_runs.push_back(&ground);
        double period = detect_period(ground.series.at("beta"));
        Outcome o;
        o.pass = std::abs(period - ground_period) <= 0.01 * ground_period;
        o.detail = "period " + fmt(period) + " vs " + fmt(ground_period);
        return o;
    });

    run_criterion(2, "closed period, excited init", [&] {
        ScenarioOptions opts;
        opts.with_snapshots = false;
        excited = run_closed_excited(SystemConfig{}, opts);
        all_runs.push_back(&excited);
        double period = detect_period(excited.series.at("beta"));
        Outcome o;
        o.pass = std::abs(period - excited_period) <= 0.01 * excited_period;
        o.detail = "period " + fmt(period) + " vs " + fmt(excited_period);
        return o;
    });

    run_criterion(3, "integrator matches diagonalization", [&] {
        double worst = 0.0;
        for (double theta : {0.0, 0.5 * pi}) {
            SystemConfig config;
            config.theta = theta;
            double period = theta == 0.0 ? ground_period : excited_period;
            DensityMatrix rho0 = initial_condition(config.theta, config.beta, config.cutoff);
            Eigen::SelfAdjointEigenSolver<Mat> es(hamiltonian(config).entries);
            TimeGrid grid{0.0, 3.0 * period, 3.0 * period / 120.0};
            evolve_observe(rho0, config, grid, [&](int, double t, const Mat& state) {
                Vec phases(rho0.dim);
                for (int k = 0; k < rho0.dim; ++k)
                    phases(k) = std::exp(cplx(0.0, -es.eigenvalues()(k) * t));
                Mat u = es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
                Mat exact = u * rho0.entries * u.adjoint();
                worst = std::max(worst, (state - exact).cwiseAbs().maxCoeff());
            });
        }
        Outcome o;
        o.pass = worst <= 1e-8;
        o.detail = "max entry error " + fmt(worst) + " (tol 1e-8)";
        return o;
    });

    run_criterion(4, "entanglement locks to the beta period", [&] {
        Outcome o;
        o.pass = true;
        for (const ScenarioResult* run : {&ground, &excited}) {
            if (run->series.empty()) {
                o.pass = false;
                o.detail = "missing closed runs";
                return o;
            }
            double dt = run->grid.dt_sample;
            double p_beta = detect_period(run->series.at("beta"));
            double p_neg = detect_period(run->series.at("negativity"));
            double p_ent = detect_period(run->series.at("linear_entropy"));
            if (std::abs(p_neg - p_beta) > 2.0 * dt || std::abs(p_ent - p_beta) > 2.0 * dt)
                o.pass = false;
            o.detail += run->name + ": beta/neg/entropy " + fmt(p_beta) + "/" + fmt(p_neg) + "/" +
                        fmt(p_ent) + "  ";
        }
        // ground init: peak entanglement exactly when the |3> weight is parked
        // in the dot manifold, i.e. at the minima of p3
        const std::vector<double>& neg = ground.series.at("negativity").values;
        const std::vector<double>& p3 = ground.series.at("pop_3").values;
        std::vector<int> neg_max = local_maxima(neg);
        std::vector<int> p3_min = local_minima(p3);
        int worst_offset = 0;
        for (int idx : neg_max)
            worst_offset = std::max(worst_offset, nearest_offset(p3_min, idx));
        if (worst_offset > 2) o.pass = false;
        o.detail += "alignment offset " + std::to_string(worst_offset) + " samples";
        return o;
    });

    run_criterion(5, "purity ties entropy to negativity", [&] {
        double worst = 0.0;
        for (const ScenarioResult* run : {&ground, &excited}) {
            if (run->series.empty()) return Outcome{false, "missing closed runs"};
            const std::vector<double>& neg = run->series.at("negativity").values;
            const std::vector<double>& ent = run->series.at("linear_entropy").values;
            for (size_t k = 0; k < neg.size(); ++k)
                worst = std::max(worst, std::abs(ent[k] - 2.0 * neg[k] * neg[k]));
        }
        Outcome o;
        o.pass = worst <= 1e-8;
        o.detail = "max |delta - 2N^2| = " + fmt(worst) + " (tol 1e-8)";
        return o;
    });

    run_criterion(6, "wigner anchors and normalization", [&] {
        FockCutoff cutoff(15);
        double w_vac = wigner_point(density(fock_state(0, cutoff)), cplx(0, 0));
        double w_three = wigner_point(density(fock_state(3, cutoff)), cplx(0, 0));
        DensityMatrix state = density(three_photon_state(0.9, cutoff));
        double w_state = wigner_point(state, cplx(0, 0));
        WignerGrid wg = wigner_grid(state, PhaseSpaceGrid{});
        double integral = wg.integral();
        Outcome o;
        o.pass = std::abs(w_vac - 2.0) <= 1e-6 && std::abs(w_three + 2.0) <= 1e-6 &&
                 std::abs(w_state - 1.24) <= 1e-6 && std::abs(integral - pi) <= 0.02 * pi;
        o.detail = "W(0) = " + fmt(w_vac) + "/" + fmt(w_three) + "/" + fmt(w_state) +
                   ", integral " + fmt(integral);
        return o;
    });

    run_criterion(7, "sudden death and revivals in kappa", [&] {
        ScenarioOptions opts;
        opts.with_steady_comparison = false;
        std::string detail;
        std::vector<int> revivals;
        bool smallest_has_revival = false;
        for (double kappa : {2.0, 4.0, 6.0}) {
            SystemConfig config;
            config.pump_P = 0.5;
            config.kappa = kappa;
            kappa_runs.push_back(run_dissipative(config, opts));
            const ScenarioResult& r = kappa_runs.back();
            const SuddenDeathReport& rep = *r.sudden_death;
            revivals.push_back(rep.revival_count);
            if (kappa == 2.0)
                smallest_has_revival = !rep.dead_intervals.empty() && rep.revival_count >= 1;
            detail += "kappa=" + fmt(kappa) + ": " + std::to_string(rep.dead_intervals.size()) +
                      " dead, " + std::to_string(rep.revival_count) + " revivals  ";
        }
        for (const ScenarioResult& r : kappa_runs) all_runs.push_back(&r);
        Outcome o;
        o.pass = smallest_has_revival && revivals[0] >= revivals[1] && revivals[1] >= revivals[2];
        o.detail = detail;
        return o;
    });

    run_criterion(8, "pump sweep lowers and hastens the peak", [&] {
        ScenarioSpec spec;
        spec.name = "acceptance";
        spec.config.kappa = 6.0;
        spec.grid.t_end = 4.0;
        spec.grid.dt_sample = 0.002;
        SweepSpec sweep;
        sweep.parameter = SweepParameter::pump_P;
        sweep.values = {0.5, 1.5, 3.0};
        spec.sweep = sweep;
        ScenarioOptions opts;
        opts.with_steady_comparison = false;
        pump_runs = run_dissipative_sweep(spec, opts);
        for (const ScenarioResult& r : pump_runs) all_runs.push_back(&r);

        std::string detail;
        std::vector<PeakEstimate> peaks;
        for (const ScenarioResult& r : pump_runs) {
            peaks.push_back(peak_estimate(r.series.at("negativity")));
            detail += "peak " + fmt(peaks.back().value) + " @ " + fmt(peaks.back().t) + "  ";
        }
        Outcome o;
        o.pass = peaks[0].value > peaks[1].value && peaks[1].value > peaks[2].value &&
                 peaks[0].t > peaks[1].t && peaks[1].t > peaks[2].t;
        o.detail = detail;
        return o;
    });

    run_criterion(9, "steady state forgets the initial state", [&] {
        SystemConfig config;
        config.pump_P = 0.5;
        config.kappa = 6.0;
        ScenarioOptions opts;
        opts.with_steady_comparison = false;
        opts.t_end = 10.0;
        opts.dt_sample = 0.01;

        config.theta = 0.0;
        relax_ground = run_dissipative(config, opts);
        config.theta = 0.5 * pi;
        relax_excited = run_dissipative(config, opts);
        all_runs.push_back(&relax_ground);
        all_runs.push_back(&relax_excited);

        DensityMatrix steady = steady_state(config);
        double d01 = trace_distance(relax_ground.final_state, relax_excited.final_state);
        double d0s = trace_distance(relax_ground.final_state, steady);
        double d1s = trace_distance(relax_excited.final_state, steady);
        Outcome o;
        o.pass = d01 < 1e-6 && d0s < 1e-6 && d1s < 1e-6;
        o.detail = "distances " + fmt(d01) + "/" + fmt(d0s) + "/" + fmt(d1s) + " (tol 1e-6)";
        return o;
    });

    run_criterion(10, "structural invariants on every run", [&] {
        double drift = 0.0, herm = 0.0, mineig = 1.0;
        for (const ScenarioResult* r : all_runs) {
            drift = std::max(drift, r->diagnostics.max_trace_drift);
            herm = std::max(herm, r->diagnostics.max_hermiticity_residue);
            mineig = std::min(mineig, r->diagnostics.min_eigenvalue);
        }
        std::ostringstream sink;
        bool checks_ok = selftest::run_all(sink);
        Outcome o;
        o.pass = !all_runs.empty() && drift < 1e-7 && herm < 1e-10 && mineig > -1e-9 && checks_ok;
        o.detail = "drift " + fmt(drift) + ", herm " + fmt(herm) + ", min eig " + fmt(mineig) +
                   ", self-test " + (checks_ok ? "ok" : "FAILED");
        if (!checks_ok) o.detail += "\n" + sink.str();
        return o;
    });

    if (g_failures == 0)
        std::printf("acceptance: all 10 criteria passed\n");
    else
        std::printf("acceptance: %d criteria failed\n", g_failures);
    return g_failures;
}
