#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace triphoton {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;

inline constexpr double pi = 3.14159265358979323846;

// Bad user-supplied values (configs, parameter bounds, malformed input).
struct validation_error : std::runtime_error {
    explicit validation_error(const std::string& msg) : std::runtime_error(msg) {}
};

// A structural guarantee failed at runtime (trace drift, hermiticity, residuals).
struct invariant_violation : std::runtime_error {
    explicit invariant_violation(const std::string& msg) : std::runtime_error(msg) {}
};

// detect_period found no autocorrelation peak above threshold.
struct aperiodic_signal_error : std::runtime_error {
    explicit aperiodic_signal_error(const std::string& msg) : std::runtime_error(msg) {}
};

// extract_beta called on a state with no weight on |0> or |3>.
struct undefined_fit_error : std::runtime_error {
    explicit undefined_fit_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace triphoton
