#pragma once

// Scalar diagnostics of the evolving state: negativity, linear entropy, the
// |beta| component-weight fit, Fock populations, and time-series analyses
// (period detection, sudden-death intervals, peak refinement).

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "triphoton/common.hpp"
#include "triphoton/hilbert.hpp"

namespace triphoton {

struct TimeSeries {
    std::vector<double> times;
    std::vector<double> values;
    std::string label;

    TimeSeries() = default;
    TimeSeries(std::vector<double> t, std::vector<double> v, std::string lbl)
        : times(std::move(t)), values(std::move(v)), label(std::move(lbl)) {
        if (times.size() != values.size())
            throw validation_error("TimeSeries: times and values must have equal length");
        for (size_t i = 1; i < times.size(); ++i)
            if (!(times[i] > times[i - 1]))
                throw validation_error("TimeSeries: times must be strictly increasing");
    }
};

struct PeriodEstimate {
    double period = 0.0;
    double relative_uncertainty = 0.0;  // half the sampling interval over the period
};

struct SuddenDeathReport {
    std::vector<std::pair<double, double>> dead_intervals;
    int revival_count = 0;
    double zero_tolerance = 1e-6;
};

struct PeakEstimate {
    double t = 0.0;
    double value = 0.0;
};

// N = (||rho^(T_qubit)||_1 - 1)/2, evaluated as the absolute sum of the
// negative eigenvalues of the partial transpose.
inline double negativity(const DensityMatrix& rho) {
    OperatorMatrix pt = partial_transpose(rho, Space::qubit);
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (pt.entries + pt.entries.adjoint()),
                                          Eigen::EigenvaluesOnly);
    double neg = 0.0;
    for (int k = 0; k < es.eigenvalues().size(); ++k)
        if (es.eigenvalues()(k) < 0.0) neg -= es.eigenvalues()(k);
    return neg;
}

// delta = 1 - Tr(rho_kept^2) after tracing out the named subsystem.
inline double linear_entropy(const DensityMatrix& rho, Space traced_out = Space::field) {
    Space keep = traced_out == Space::field ? Space::qubit : Space::field;
    DensityMatrix reduced = partial_trace(rho, keep);
    double purity = (reduced.entries * reduced.entries).trace().real();
    return 1.0 - purity;
}

inline double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
    Mat d = 0.5 * ((a.entries - b.entries) + (a.entries - b.entries).adjoint());
    Eigen::SelfAdjointEigenSolver<Mat> es(d, Eigen::EigenvaluesOnly);
    return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

// |beta|(t) = sqrt(p0 / (p0 + p3)) from the reduced field populations.
inline double extract_beta(const DensityMatrix& rho_field) {
    if (rho_field.space_tag != Space::field)
        throw validation_error("extract_beta: input must be field-tagged");
    if (rho_field.dim < 4)
        throw validation_error("extract_beta: field space must hold |3>");
    double p0 = std::max(0.0, rho_field.entries(0, 0).real());
    double p3 = std::max(0.0, rho_field.entries(3, 3).real());
    if (p0 + p3 < 1e-12)
        throw undefined_fit_error("extract_beta: p0 + p3 vanishes, fit undefined");
    return std::min(1.0, std::sqrt(p0 / (p0 + p3)));
}

inline RVec fock_populations(const DensityMatrix& rho_field) {
    if (rho_field.space_tag != Space::field)
        throw validation_error("fock_populations: input must be field-tagged");
    return rho_field.entries.diagonal().real();
}

namespace detail {

// Windowed Pearson autocorrelation: each window is normalized by its own mean
// and variance, so an exactly periodic signal scores exactly 1 at the period
// regardless of how many fractional periods the overlap spans.
inline std::vector<double> pearson_autocorrelation(const std::vector<double>& x, int maxlag) {
    int n = static_cast<int>(x.size());
    std::vector<double> s1(n + 1, 0.0), s2(n + 1, 0.0);
    for (int i = 0; i < n; ++i) {
        s1[i + 1] = s1[i] + x[i];
        s2[i + 1] = s2[i] + x[i] * x[i];
    }
    std::vector<double> r(maxlag + 1, 0.0);
    r[0] = 1.0;
    for (int lag = 1; lag <= maxlag; ++lag) {
        int w = n - lag;
        double sum_a = s1[w], sum_b = s1[n] - s1[lag];
        double sq_a = s2[w], sq_b = s2[n] - s2[lag];
        double cross = 0.0;
        for (int i = 0; i < w; ++i) cross += x[i] * x[i + lag];
        double cov = cross - sum_a * sum_b / w;
        double var_a = sq_a - sum_a * sum_a / w;
        double var_b = sq_b - sum_b * sum_b / w;
        double den = var_a * var_b;
        r[lag] = den > 0.0 ? cov / std::sqrt(den) : 0.0;
    }
    return r;
}

}  // namespace detail

// Dominant period via the autocorrelation peak, refined by local quadratic
// interpolation. Tied peaks at integer multiples of the period are resolved
// toward the smallest lag.
inline PeriodEstimate detect_period_full(const TimeSeries& series) {
    const double peak_threshold = 0.5;
    const double harmonic_tol = 1e-4;
    int n = static_cast<int>(series.values.size());
    if (n < 8) throw aperiodic_signal_error("detect_period: series too short");
    double dt = (series.times.back() - series.times.front()) / (n - 1);
    int maxlag = n / 2;

    std::vector<double> r = detail::pearson_autocorrelation(series.values, maxlag);

    int lag0 = -1;  // first lag past the zero-lag lobe
    for (int lag = 1; lag <= maxlag; ++lag)
        if (r[lag] < peak_threshold) {
            lag0 = lag;
            break;
        }
    if (lag0 < 0)
        throw aperiodic_signal_error("detect_period: autocorrelation never leaves the zero-lag lobe");

    double rmax = *std::max_element(r.begin() + lag0, r.end());
    if (rmax < peak_threshold)
        throw aperiodic_signal_error("detect_period: no autocorrelation peak above 0.5");

    int k = -1;
    for (int lag = lag0; lag <= maxlag; ++lag) {
        double left = lag - 1 >= lag0 ? r[lag - 1] : -2.0;
        double right = lag + 1 <= maxlag ? r[lag + 1] : -2.0;
        if (r[lag] >= left && r[lag] >= right && r[lag] >= rmax - harmonic_tol) {
            k = lag;
            break;
        }
    }
    if (k < 0)
        k = static_cast<int>(std::max_element(r.begin() + lag0, r.end()) - r.begin());

    double offset = 0.0;
    if (k > lag0 && k < maxlag) {
        double y0 = r[k - 1], y1 = r[k], y2 = r[k + 1];
        double den = y0 - 2.0 * y1 + y2;
        if (den != 0.0) offset = std::clamp(0.5 * (y0 - y2) / den, -0.5, 0.5);
    }
    PeriodEstimate est;
    est.period = (k + offset) * dt;
    est.relative_uncertainty = 0.5 * dt / est.period;
    return est;
}

inline double detect_period(const TimeSeries& series) { return detect_period_full(series).period; }

// Maximal intervals where the series stays at or below zero_tol, plus the
// number of those intervals followed by a live sample (revivals).
inline SuddenDeathReport sudden_death_report(const TimeSeries& series, double zero_tol = 1e-6) {
    if (!(zero_tol > 0.0)) throw validation_error("sudden_death_report: zero_tol must be > 0");
    SuddenDeathReport report;
    report.zero_tolerance = zero_tol;
    int n = static_cast<int>(series.values.size());
    int i = 0;
    while (i < n) {
        if (series.values[i] <= zero_tol) {
            int j = i;
            while (j + 1 < n && series.values[j + 1] <= zero_tol) ++j;
            report.dead_intervals.emplace_back(series.times[i], series.times[j]);
            if (j + 1 < n) ++report.revival_count;
            i = j + 1;
        } else {
            ++i;
        }
    }
    return report;
}

inline std::vector<int> local_maxima(const std::vector<double>& v) {
    std::vector<int> out;
    for (int k = 1; k + 1 < static_cast<int>(v.size()); ++k)
        if (v[k] >= v[k - 1] && v[k] >= v[k + 1]) out.push_back(k);
    return out;
}

inline std::vector<int> local_minima(const std::vector<double>& v) {
    std::vector<int> out;
    for (int k = 1; k + 1 < static_cast<int>(v.size()); ++k)
        if (v[k] <= v[k - 1] && v[k] <= v[k + 1]) out.push_back(k);
    return out;
}

// Global maximum with parabolic refinement through the neighboring samples.
inline PeakEstimate peak_estimate(const TimeSeries& series) {
    int n = static_cast<int>(series.values.size());
    if (n == 0) throw validation_error("peak_estimate: empty series");
    int k = static_cast<int>(std::max_element(series.values.begin(), series.values.end()) -
                             series.values.begin());
    PeakEstimate est{series.times[k], series.values[k]};
    if (k > 0 && k + 1 < n) {
        double y0 = series.values[k - 1], y1 = series.values[k], y2 = series.values[k + 1];
        double den = y0 - 2.0 * y1 + y2;
        if (den != 0.0) {
            double d = std::clamp(0.5 * (y0 - y2) / den, -0.5, 0.5);
            double dt = 0.5 * (series.times[k + 1] - series.times[k - 1]);
            est.t = series.times[k] + d * dt;
            est.value = y1 - 0.25 * (y0 - y2) * d;
        }
    }
    return est;
}

}  // namespace triphoton
