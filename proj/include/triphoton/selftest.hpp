#pragma once

// Invariant self-test suite behind the `check` subcommand: structural algebra,
// generator equivalences, conserved quantities, measure identities, and
// Wigner anchors, each reported as one pass/fail line.

#include <cmath>
#include <functional>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "triphoton/common.hpp"
#include "triphoton/dynamics.hpp"
#include "triphoton/hilbert.hpp"
#include "triphoton/measures.hpp"
#include "triphoton/wigner.hpp"

namespace triphoton::selftest {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

namespace detail {

inline Mat random_density(int dim, std::mt19937& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Mat g(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) g(i, j) = cplx(gauss(rng), gauss(rng));
    Mat rho = g * g.adjoint();
    return rho / rho.trace();
}

}  // namespace detail

inline std::vector<CheckResult> run_checks() {
    std::vector<CheckResult> results;
    auto check = [&](const std::string& name, double residual, double tol) {
        CheckResult r;
        r.name = name;
        r.passed = residual <= tol;
        r.detail = "residual " + std::to_string(residual) + " (tol " + std::to_string(tol) + ")";
        results.push_back(r);
    };

    FockCutoff cutoff(8);
    SystemConfig config;
    config.cutoff = cutoff;
    std::mt19937 rng(20260814u);

    {  // ladder algebra: a|n> = sqrt(n)|n-1>, [a, a+] = 1 below the cutoff edge
        Mat a = annihilation(cutoff).entries;
        double res = 0.0;
        for (int n = 1; n < cutoff.n_max; ++n) {
            Vec v = a * fock_state(n, cutoff).amplitudes;
            v(n - 1) -= std::sqrt(static_cast<double>(n));
            res = std::max(res, v.cwiseAbs().maxCoeff());
        }
        Mat comm = a * a.adjoint() - a.adjoint() * a;
        for (int n = 0; n + 1 < cutoff.n_max; ++n) res = std::max(res, std::abs(comm(n, n) - 1.0));
        check("ladder algebra", res, 1e-12);
    }

    {  // generator preserves trace and hermiticity on random states
        config.pump_P = 0.5;
        config.kappa = 2.0;
        double res = 0.0;
        for (int trial = 0; trial < 3; ++trial) {
            DensityMatrix rho(Space::joint, detail::random_density(cutoff.joint_dim(), rng));
            Mat dr = lindblad_rhs(rho, config);
            res = std::max(res, std::abs(dr.trace()));
            res = std::max(res, (dr - dr.adjoint()).cwiseAbs().maxCoeff());
        }
        check("generator trace and hermiticity preservation", res, 1e-12);
    }

    {  // banded fast path equals the operator-form generator
        triphoton::detail::LindbladWorkspace ws(config);
        double res = 0.0;
        Mat out(cutoff.joint_dim(), cutoff.joint_dim());
        for (int trial = 0; trial < 3; ++trial) {
            DensityMatrix rho(Space::joint, detail::random_density(cutoff.joint_dim(), rng));
            ws.rhs(rho.entries, out);
            res = std::max(res, (out - lindblad_rhs(rho, config)).cwiseAbs().maxCoeff());
        }
        check("fast generator equals operator form", res, 1e-11);
    }

    {  // integrator matches the exact closed-system propagator
        SystemConfig closed = config;
        closed.pump_P = 0.0;
        closed.kappa = 0.0;
        DensityMatrix rho0 = initial_condition(0.3, closed.beta, cutoff);
        TimeGrid grid{0.0, 0.05, 0.05};
        Trajectory traj = evolve(rho0, closed, grid);
        Mat exact = evolve_exact_closed(rho0, closed, 0.05).entries;
        check("integrator vs exact closed propagator",
              (traj.states.back().entries - exact).cwiseAbs().maxCoeff(), 1e-10);
    }

    {  // closed run conserves trace, purity, and energy
        SystemConfig closed = config;
        closed.pump_P = 0.0;
        closed.kappa = 0.0;
        DensityMatrix rho0 = initial_condition(0.0, closed.beta, cutoff);
        Mat h = hamiltonian(closed).entries;
        double e0 = (h * rho0.entries).trace().real();
        double res = 0.0;
        TimeGrid grid{0.0, 0.1, 0.01};
        evolve_observe(rho0, closed, grid, [&](int, double, const Mat& state) {
            res = std::max(res, std::abs(state.trace().real() - 1.0));
            res = std::max(res, std::abs((state * state).trace().real() - 1.0));
            res = std::max(res, std::abs((h * state).trace().real() - e0));
        });
        check("closed-run conserved quantities", res, 1e-9);
    }

    {  // steady state annihilated by the generator and stationary under re-evolution
        SystemConfig open = config;
        open.pump_P = 0.5;
        open.kappa = 6.0;
        DensityMatrix steady = steady_state(open);
        double res = lindblad_rhs(steady, open).cwiseAbs().maxCoeff();
        TimeGrid grid{0.0, 0.2, 0.2};
        Trajectory traj = evolve(steady, open, grid);
        res = std::max(res, (traj.states.back().entries - steady.entries).cwiseAbs().maxCoeff());
        check("steady state is a fixed point", res, 1e-8);
    }

    {  // negativity anchors: product state 0, Bell pair 1/2, pure-state delta = 2N^2
        DensityMatrix product = initial_condition(0.0, config.beta, cutoff);
        double res = negativity(product);
        Vec bell = Vec::Zero(cutoff.joint_dim());
        bell(0) = 1.0 / std::sqrt(2.0);             // |g,0>
        bell(cutoff.n_max + 1) = 1.0 / std::sqrt(2.0);  // |e,1>
        DensityMatrix bell_rho = density(PureState(Space::joint, bell));
        res = std::max(res, std::abs(negativity(bell_rho) - 0.5));
        res = std::max(res, std::abs(linear_entropy(bell_rho) -
                                     2.0 * negativity(bell_rho) * negativity(bell_rho)));
        check("negativity and linear-entropy anchors", res, 1e-12);
    }

    {  // partial transpose is an involution and preserves the spectrum bound
        DensityMatrix rho(Space::joint, detail::random_density(cutoff.joint_dim(), rng));
        OperatorMatrix pt = partial_transpose(rho, Space::qubit);
        DensityMatrix ptd(Space::joint, pt.entries);
        OperatorMatrix ptpt = partial_transpose(ptd, Space::qubit);
        check("partial transpose involution",
              (ptpt.entries - rho.entries).cwiseAbs().maxCoeff(), 1e-14);
    }

    {  // displacement unitarity and Wigner origin anchors
        cplx alpha(0.7, -0.4);
        Mat d = displacement(alpha, FockCutoff(30)).entries;
        double res = (d * d.adjoint() - Mat::Identity(30, 30)).cwiseAbs().maxCoeff();
        DisplacedParityEngine engine(30);
        res = std::max(res, (engine.displacement_matrix(alpha) - d).cwiseAbs().maxCoeff());
        FockCutoff field(15);
        res = std::max(res, std::abs(wigner_point(density(fock_state(0, field)), 0.0) - 2.0));
        res = std::max(res, std::abs(wigner_point(density(fock_state(3, field)), 0.0) + 2.0));
        res = std::max(res,
                       std::abs(wigner_point(density(three_photon_state(0.9, field)), 0.0) - 1.24));
        check("displacement unitarity and Wigner anchors", res, 1e-8);
    }

    {  // period detector recovers a known period and the beta fit its input
        std::vector<double> t(600), v(600);
        for (int i = 0; i < 600; ++i) {
            t[i] = 0.01 * i;
            v[i] = std::cos(2.0 * pi * t[i] / 1.37);
        }
        PeriodEstimate est = detect_period_full(TimeSeries(t, v, "probe"));
        double res = std::abs(est.period - 1.37);
        res = std::max(res, std::abs(extract_beta(density(three_photon_state(0.9, cutoff))) - 0.9));
        check("period detector and beta fit", res, 1e-2);
    }

    return results;
}

inline bool run_all(std::ostream& os) {
    bool all = true;
    for (const CheckResult& r : run_checks()) {
        os << (r.passed ? "[ok]   " : "[FAIL] ") << r.name << " (" << r.detail << ")\n";
        all = all && r.passed;
    }
    return all;
}

}  // namespace triphoton::selftest
