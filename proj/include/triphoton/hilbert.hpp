#pragma once

// Truncated qubit (x) Fock space: ladder operators, composite states, and the
// structural maps (tensor product, partial trace, partial transpose).
//
// Basis ordering on the joint space: (g,0),(g,1),...,(g,n_max-1),(e,0),...
// The qubit is the slow (outer) index, so joint index i = q*n_max + m with
// q = 0 for |g>, q = 1 for |e>. Qubit ordering is (g,e) and sigma = |g><e|.

#include <cmath>
#include <string>

#include "triphoton/common.hpp"

namespace triphoton {

enum class Space { qubit, field, joint };

struct FockCutoff {
    int n_max;

    explicit FockCutoff(int n) : n_max(n) {
        if (n < 1) throw validation_error("FockCutoff: n_max must be >= 1");
    }
    int joint_dim() const { return 2 * n_max; }
};

struct OperatorMatrix {
    int dim = 0;
    Space space_tag = Space::joint;
    Mat entries;
    std::string warning;  // empty unless a validity caveat is attached

    OperatorMatrix() = default;
    OperatorMatrix(Space tag, Mat m) : dim(static_cast<int>(m.rows())), space_tag(tag), entries(std::move(m)) {
        if (entries.rows() != entries.cols())
            throw validation_error("OperatorMatrix: entries must be square");
        if (tag == Space::qubit && dim != 2)
            throw validation_error("OperatorMatrix: qubit operators must be 2x2");
        if (tag == Space::joint && dim % 2 != 0)
            throw validation_error("OperatorMatrix: joint dimension must be even");
    }

    OperatorMatrix adjoint() const { return OperatorMatrix(space_tag, entries.adjoint()); }
};

struct PureState {
    int dim = 0;
    Space space_tag = Space::field;
    Vec amplitudes;

    PureState() = default;
    PureState(Space tag, Vec amps) : dim(static_cast<int>(amps.size())), space_tag(tag), amplitudes(std::move(amps)) {
        double norm_err = std::abs(amplitudes.norm() - 1.0);
        if (norm_err > 1e-12)
            throw validation_error("PureState: amplitudes must be normalized (|norm - 1| = " +
                                   std::to_string(norm_err) + ")");
    }
};

struct DensityMatrix {
    int dim = 0;
    Space space_tag = Space::joint;
    Mat entries;
    std::string warning;

    DensityMatrix() = default;
    DensityMatrix(Space tag, Mat m) : dim(static_cast<int>(m.rows())), space_tag(tag), entries(std::move(m)) {
        if (entries.rows() != entries.cols())
            throw validation_error("DensityMatrix: entries must be square");
    }

    double hermiticity_residue() const {
        return (entries - entries.adjoint()).cwiseAbs().maxCoeff();
    }
    double trace_error() const { return std::abs(entries.trace() - cplx(1.0, 0.0)); }
    double min_eigenvalue() const {
        Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (entries + entries.adjoint()),
                                              Eigen::EigenvaluesOnly);
        return es.eigenvalues().minCoeff();
    }

    // Checks the density-matrix invariants; throws invariant_violation on failure.
    void validate(double herm_tol = 1e-10, double trace_tol = 1e-9, double psd_tol = 1e-9) const {
        double h = hermiticity_residue();
        if (h > herm_tol)
            throw invariant_violation("DensityMatrix: hermiticity residue " + std::to_string(h));
        double t = trace_error();
        if (t > trace_tol)
            throw invariant_violation("DensityMatrix: trace error " + std::to_string(t));
        double e = min_eigenvalue();
        if (e < -psd_tol)
            throw invariant_violation("DensityMatrix: min eigenvalue " + std::to_string(e));
    }
};

// <n-1| a |n> = sqrt(n) on the truncated field space.
inline OperatorMatrix annihilation(FockCutoff cutoff) {
    int n = cutoff.n_max;
    Mat a = Mat::Zero(n, n);
    for (int k = 1; k < n; ++k) a(k - 1, k) = std::sqrt(static_cast<double>(k));
    return OperatorMatrix(Space::field, std::move(a));
}

// sigma = |g><e| with qubit ordering (g,e).
inline OperatorMatrix qubit_lowering() {
    Mat s = Mat::Zero(2, 2);
    s(0, 1) = 1.0;
    return OperatorMatrix(Space::qubit, std::move(s));
}

// Joint-space embedding with the qubit as the slow index.
inline OperatorMatrix tensor(const OperatorMatrix& qubit_op, const OperatorMatrix& field_op) {
    if (qubit_op.space_tag != Space::qubit || field_op.space_tag != Space::field)
        throw validation_error("tensor: expects (qubit, field) operands");
    int n = field_op.dim;
    Mat out(2 * n, 2 * n);
    for (int q1 = 0; q1 < 2; ++q1)
        for (int q2 = 0; q2 < 2; ++q2)
            out.block(q1 * n, q2 * n, n, n) = qubit_op.entries(q1, q2) * field_op.entries;
    return OperatorMatrix(Space::joint, std::move(out));
}

inline OperatorMatrix identity_op(Space tag, FockCutoff cutoff) {
    int d = tag == Space::qubit ? 2 : (tag == Space::field ? cutoff.n_max : cutoff.joint_dim());
    return OperatorMatrix(tag, Mat::Identity(d, d));
}

// Normalized field state from arbitrary Fock amplitudes.
inline PureState fock_superposition(const Vec& amplitudes, FockCutoff cutoff) {
    if (amplitudes.size() != cutoff.n_max)
        throw validation_error("fock_superposition: amplitude vector must have n_max entries");
    double nrm = amplitudes.norm();
    if (nrm < 1e-14) throw validation_error("fock_superposition: zero amplitude vector");
    return PureState(Space::field, amplitudes / nrm);
}

inline PureState fock_state(int n, FockCutoff cutoff) {
    if (n < 0 || n >= cutoff.n_max)
        throw validation_error("fock_state: level outside the cutoff");
    Vec v = Vec::Zero(cutoff.n_max);
    v(n) = 1.0;
    return PureState(Space::field, std::move(v));
}

// beta|0> + sqrt(1 - |beta|^2)|3>.
inline PureState three_photon_state(cplx beta, FockCutoff cutoff) {
    double b2 = std::norm(beta);
    if (b2 > 1.0 + 1e-12)
        throw validation_error("three_photon_state: |beta| must be <= 1");
    if (cutoff.n_max < 4)
        throw validation_error("three_photon_state: n_max must be >= 4 to hold |3>");
    Vec v = Vec::Zero(cutoff.n_max);
    v(0) = beta;
    v(3) = std::sqrt(std::max(0.0, 1.0 - b2));
    return PureState(Space::field, std::move(v));
}

inline DensityMatrix density(const PureState& psi) {
    return DensityMatrix(psi.space_tag, psi.amplitudes * psi.amplitudes.adjoint());
}

// rho = |psi><psi| with |psi> = (cos(theta)|g> + sin(theta)|e>) (x) (beta|0> + sqrt(1-|beta|^2)|3>).
inline DensityMatrix initial_condition(double theta, cplx beta, FockCutoff cutoff) {
    PureState field = three_photon_state(beta, cutoff);
    int n = cutoff.n_max;
    Vec joint(2 * n);
    joint.segment(0, n) = std::cos(theta) * field.amplitudes;
    joint.segment(n, n) = std::sin(theta) * field.amplitudes;
    return density(PureState(Space::joint, std::move(joint)));
}

inline DensityMatrix partial_trace(const DensityMatrix& rho, Space keep) {
    if (rho.space_tag != Space::joint)
        throw validation_error("partial_trace: input must be joint-tagged");
    int n = rho.dim / 2;
    if (keep == Space::qubit) {
        Mat out = Mat::Zero(2, 2);
        for (int q1 = 0; q1 < 2; ++q1)
            for (int q2 = 0; q2 < 2; ++q2)
                for (int m = 0; m < n; ++m) out(q1, q2) += rho.entries(q1 * n + m, q2 * n + m);
        return DensityMatrix(Space::qubit, std::move(out));
    }
    if (keep == Space::field) {
        Mat out = rho.entries.block(0, 0, n, n) + rho.entries.block(n, n, n, n);
        return DensityMatrix(Space::field, std::move(out));
    }
    throw validation_error("partial_trace: keep must be qubit or field");
}

inline OperatorMatrix partial_transpose(const DensityMatrix& rho, Space subsystem) {
    if (rho.space_tag != Space::joint)
        throw validation_error("partial_transpose: input must be joint-tagged");
    int n = rho.dim / 2;
    Mat out(rho.dim, rho.dim);
    if (subsystem == Space::qubit) {
        for (int q1 = 0; q1 < 2; ++q1)
            for (int q2 = 0; q2 < 2; ++q2)
                out.block(q1 * n, q2 * n, n, n) = rho.entries.block(q2 * n, q1 * n, n, n);
    } else if (subsystem == Space::field) {
        for (int q1 = 0; q1 < 2; ++q1)
            for (int q2 = 0; q2 < 2; ++q2)
                out.block(q1 * n, q2 * n, n, n) = rho.entries.block(q1 * n, q2 * n, n, n).transpose();
    } else {
        throw validation_error("partial_transpose: subsystem must be qubit or field");
    }
    return OperatorMatrix(Space::joint, std::move(out));
}

}  // namespace triphoton
