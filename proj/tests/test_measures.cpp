#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "test_helpers.hpp"
#include "triphoton/measures.hpp"

using namespace triphoton;
using Catch::Approx;

namespace {

DensityMatrix two_level_superposition(double angle, int n_max) {
    // cos(angle)|g,0> + sin(angle)|e,1>
    Vec v = Vec::Zero(2 * n_max);
    v(0) = std::cos(angle);
    v(n_max + 1) = std::sin(angle);
    return density(PureState(Space::joint, v));
}

}  // namespace

TEST_CASE("time series validation", "[measures]") {
    CHECK_THROWS_AS(TimeSeries({0.0, 1.0}, {1.0}, "x"), validation_error);
    CHECK_THROWS_AS(TimeSeries({0.0, 0.0, 1.0}, {1.0, 2.0, 3.0}, "x"), validation_error);
    CHECK_NOTHROW(TimeSeries({0.0, 0.5, 1.0}, {1.0, 2.0, 3.0}, "x"));
}

TEST_CASE("negativity anchors", "[measures]") {
    int n = 5;
    CHECK(negativity(two_level_superposition(0.25 * pi, n)) == Approx(0.5).margin(1e-12));
    CHECK(negativity(two_level_superposition(0.125 * pi, n)) ==
          Approx(0.25 * std::sqrt(2.0)).margin(1e-12));

    std::mt19937 rng(53u);
    for (int trial = 0; trial < 100; ++trial) {
        Mat rq = testutil::random_density(2, rng);
        Mat rf = testutil::random_density(n, rng);
        DensityMatrix product(Space::joint, testutil::product_density(rq, rf));
        CHECK(negativity(product) < 1e-10);
    }
}

TEST_CASE("negativity is bounded and locally unitary invariant", "[measures]") {
    int n = 5;
    std::mt19937 rng(59u);
    for (int trial = 0; trial < 20; ++trial) {
        DensityMatrix rho(Space::joint, testutil::random_density(2 * n, rng));
        double nv = negativity(rho);
        CHECK(nv >= 0.0);
        CHECK(nv <= 0.5 + 1e-12);

        Mat u = testutil::product_density(testutil::random_unitary(2, rng),
                                          testutil::random_unitary(n, rng));
        // product_density multiplies blocks, which for unitaries is the tensor product
        DensityMatrix rotated(Space::joint, u * rho.entries * u.adjoint());
        CHECK(negativity(rotated) == Approx(nv).margin(1e-9));
    }
}

TEST_CASE("linear entropy anchors", "[measures]") {
    int n = 5;
    DensityMatrix bell = two_level_superposition(0.25 * pi, n);
    CHECK(linear_entropy(bell) == Approx(0.5).margin(1e-12));
    CHECK(linear_entropy(bell, Space::qubit) == Approx(0.5).margin(1e-12));
    CHECK(linear_entropy(two_level_superposition(0.125 * pi, n)) == Approx(0.25).margin(1e-12));

    std::mt19937 rng(61u);
    Vec vq = testutil::random_pure(2, rng);
    Vec vf = testutil::random_pure(n, rng);
    DensityMatrix product(Space::joint,
                          testutil::product_density(vq * vq.adjoint(), vf * vf.adjoint()));
    CHECK(linear_entropy(product) < 1e-12);
    CHECK(linear_entropy(product, Space::qubit) < 1e-12);
}

TEST_CASE("pure states tie entropy to negativity", "[measures]") {
    int n = 6;
    std::mt19937 rng(67u);
    for (int trial = 0; trial < 25; ++trial) {
        DensityMatrix rho = density(PureState(Space::joint, testutil::random_pure(2 * n, rng)));
        double nv = negativity(rho);
        double delta = linear_entropy(rho);
        CHECK(delta == Approx(2.0 * nv * nv).margin(1e-9));
        CHECK(linear_entropy(rho, Space::qubit) == Approx(delta).margin(1e-11));
        CHECK(delta > 0.0);
        CHECK(nv > 0.0);
    }
}

TEST_CASE("beta extraction from field populations", "[measures]") {
    FockCutoff cutoff(8);
    DensityMatrix field = density(three_photon_state(0.9, cutoff));
    CHECK(extract_beta(field) == Approx(0.9).margin(1e-12));

    RVec pops = fock_populations(field);
    REQUIRE(pops.size() == 8);
    CHECK(pops(0) == Approx(0.81).margin(1e-12));
    CHECK(pops(3) == Approx(0.19).margin(1e-12));
    CHECK(pops.sum() == Approx(1.0).margin(1e-12));

    DensityMatrix vacuum = density(fock_state(0, cutoff));
    CHECK(extract_beta(vacuum) == Approx(1.0));
    DensityMatrix one = density(fock_state(1, cutoff));
    CHECK_THROWS_AS(extract_beta(one), undefined_fit_error);

    std::mt19937 rng(71u);
    for (int trial = 0; trial < 50; ++trial) {
        DensityMatrix rho(Space::field, testutil::random_density(8, rng));
        double b = extract_beta(rho);
        CHECK(b >= 0.0);
        CHECK(b <= 1.0);
    }

    DensityMatrix joint_tagged(Space::joint, testutil::random_density(16, rng));
    CHECK_THROWS_AS(extract_beta(joint_tagged), validation_error);
}

TEST_CASE("period detection on synthetic signals", "[measures]") {
    double dt = 0.01, period = 1.37;
    std::vector<double> t, v, decay, flat;
    for (int k = 0; k <= 600; ++k) {
        t.push_back(k * dt);
        v.push_back(std::sin(2.0 * pi * t.back() / period));
        decay.push_back(std::exp(-t.back()));
        flat.push_back(0.42);
    }
    PeriodEstimate est = detect_period_full(TimeSeries(t, v, "sine"));
    CHECK(est.period == Approx(period).margin(dt));
    CHECK(est.relative_uncertainty == Approx(0.5 * dt / est.period));

    CHECK_THROWS_AS(detect_period(TimeSeries(t, decay, "decay")), aperiodic_signal_error);
    CHECK_THROWS_AS(detect_period(TimeSeries(t, flat, "flat")), aperiodic_signal_error);
    CHECK_THROWS_AS(detect_period(TimeSeries({0.0, 1.0, 2.0}, {0.0, 1.0, 0.0}, "short")),
                    aperiodic_signal_error);
}

TEST_CASE("period detection resolves the fundamental among harmonics", "[measures]") {
    // equal-amplitude peaks repeat at every multiple of the period; the
    // estimate must pick the smallest one
    double dt = 0.02, period = 0.9;
    std::vector<double> t, v;
    for (int k = 0; k <= 500; ++k) {
        t.push_back(k * dt);
        v.push_back(std::cos(2.0 * pi * t.back() / period));
    }
    CHECK(detect_period(TimeSeries(t, v, "cosine")) == Approx(period).margin(dt));
}

TEST_CASE("sudden death intervals and revivals", "[measures]") {
    std::vector<double> t{0, 1, 2, 3, 4, 5, 6};
    TimeSeries pattern(t, {0.5, 0.0, 0.0, 0.3, 0.2, 0.0, 0.0}, "n");
    SuddenDeathReport rep = sudden_death_report(pattern, 1e-6);
    REQUIRE(rep.dead_intervals.size() == 2);
    CHECK(rep.dead_intervals[0].first == 1.0);
    CHECK(rep.dead_intervals[0].second == 2.0);
    CHECK(rep.dead_intervals[1].first == 5.0);
    CHECK(rep.dead_intervals[1].second == 6.0);
    CHECK(rep.revival_count == 1);
    CHECK(rep.zero_tolerance == 1e-6);

    SuddenDeathReport all_dead = sudden_death_report(TimeSeries(t, std::vector<double>(7, 0.0), "n"));
    REQUIRE(all_dead.dead_intervals.size() == 1);
    CHECK(all_dead.dead_intervals[0].first == 0.0);
    CHECK(all_dead.dead_intervals[0].second == 6.0);
    CHECK(all_dead.revival_count == 0);

    SuddenDeathReport alive = sudden_death_report(TimeSeries(t, {1, 2, 3, 4, 5, 6, 7}, "n"));
    CHECK(alive.dead_intervals.empty());
    CHECK(alive.revival_count == 0);

    CHECK_THROWS_AS(sudden_death_report(pattern, 0.0), validation_error);
    CHECK_THROWS_AS(sudden_death_report(pattern, -1.0), validation_error);
}

TEST_CASE("peak refinement is exact on a parabola", "[measures]") {
    std::vector<double> t, v;
    for (int k = 0; k <= 20; ++k) {
        t.push_back(0.1 * k);
        v.push_back(1.0 - (t.back() - 1.03) * (t.back() - 1.03));
    }
    PeakEstimate est = peak_estimate(TimeSeries(t, v, "p"));
    CHECK(est.t == Approx(1.03).margin(1e-12));
    CHECK(est.value == Approx(1.0).margin(1e-12));
}

TEST_CASE("local extrema detection", "[measures]") {
    std::vector<double> v{0, 1, 0, 2, 2, 0, 3};
    auto maxima = local_maxima(v);
    REQUIRE(maxima.size() == 3);
    CHECK(maxima[0] == 1);
    CHECK(maxima[1] == 3);
    CHECK(maxima[2] == 4);
    auto minima = local_minima(v);
    REQUIRE(minima.size() == 2);
    CHECK(minima[0] == 2);
    CHECK(minima[1] == 5);
}

TEST_CASE("trace distance basics", "[measures]") {
    FockCutoff cutoff(5);
    DensityMatrix zero = density(fock_state(0, cutoff));
    DensityMatrix one = density(fock_state(1, cutoff));
    CHECK(trace_distance(zero, zero) == Approx(0.0).margin(1e-15));
    CHECK(trace_distance(zero, one) == Approx(1.0).margin(1e-12));

    std::mt19937 rng(73u);
    DensityMatrix a(Space::field, testutil::random_density(5, rng));
    DensityMatrix b(Space::field, testutil::random_density(5, rng));
    double d = trace_distance(a, b);
    CHECK(d > 0.0);
    CHECK(d <= 1.0 + 1e-12);
    CHECK(trace_distance(b, a) == Approx(d));
}
