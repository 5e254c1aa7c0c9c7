#pragma once

// Jaynes-Cummings Hamiltonian, Lindblad master-equation integration (fixed-step
// RK4), an exact closed-system oracle via full diagonalization, and the
// steady state from the null space of the vectorized Liouvillian.
//
// Master equation convention (coherent term written with rho first):
//   drho/dt = i[rho,H] + (P/2)(2 s+ rho s-  -  s- s+ rho - rho s- s+)
//           + (kappa/2)(2 a rho a+ - a+ a rho - rho a+ a)
// with s+ = sigma^dagger the pump jump and a the leakage jump.

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>
#include <vector>

#include "triphoton/common.hpp"
#include "triphoton/hilbert.hpp"

namespace triphoton {

struct SystemConfig {
    double g = 10.0;
    double omega_a = 0.0;
    double omega_sigma = 0.0;
    double pump_P = 0.0;
    double kappa = 0.0;
    FockCutoff cutoff{15};
    double theta = 0.0;
    cplx beta{0.9, 0.0};

    double detuning() const { return omega_a - omega_sigma; }

    void validate() const {
        // g = 0 is admitted for decoupled-limit diagnostics even though every
        // physical preset has g > 0.
        if (g < 0.0) throw validation_error("SystemConfig: g must be >= 0");
        if (pump_P < 0.0) throw validation_error("SystemConfig: pump must be >= 0");
        if (kappa < 0.0) throw validation_error("SystemConfig: kappa must be >= 0");
        if (std::norm(beta) > 1.0 + 1e-12)
            throw validation_error("SystemConfig: beta must satisfy |beta| <= 1");
        if (cutoff.n_max < 5)
            throw validation_error("SystemConfig: n_max must be >= 5 (holds |0>, |3>, and |4>)");
    }
};

struct TimeGrid {
    double t_start = 0.0;
    double t_end = 0.0;
    double dt_sample = 0.0;

    void validate() const {
        if (!(t_end > t_start)) throw validation_error("TimeGrid: t_end must exceed t_start");
        if (!(dt_sample > 0.0)) throw validation_error("TimeGrid: dt_sample must be > 0");
        if (dt_sample > t_end - t_start + 1e-15)
            throw validation_error("TimeGrid: dt_sample must not exceed the span");
    }
    int n_samples() const {  // sample count including both endpoints
        return static_cast<int>(std::llround((t_end - t_start) / dt_sample)) + 1;
    }
};

struct Trajectory {
    std::vector<double> times;
    std::vector<DensityMatrix> states;
};

inline OperatorMatrix hamiltonian(const SystemConfig& config) {
    int n = config.cutoff.n_max;
    Mat h = Mat::Zero(2 * n, 2 * n);
    for (int m = 0; m < n; ++m) {
        h(m, m) = config.omega_a * m;                          // (g,m)
        h(n + m, n + m) = config.omega_a * m + config.omega_sigma;  // (e,m)
    }
    for (int m = 0; m + 1 < n; ++m) {
        double j = config.g * std::sqrt(m + 1.0);  // couples (g,m+1) <-> (e,m)
        h(m + 1, n + m) = j;
        h(n + m, m + 1) = j;
    }
    return OperatorMatrix(Space::joint, std::move(h));
}

// Reference right-hand side, written directly from the operator formula.
inline Mat lindblad_rhs(const DensityMatrix& rho, const SystemConfig& config) {
    if (rho.space_tag != Space::joint)
        throw validation_error("lindblad_rhs: input must be joint-tagged");
    const Mat& r = rho.entries;
    Mat h = hamiltonian(config).entries;
    Mat out = cplx(0, 1) * (r * h - h * r);
    if (config.pump_P != 0.0) {
        Mat sp = tensor(qubit_lowering().adjoint(), identity_op(Space::field, config.cutoff)).entries;
        Mat sm = sp.adjoint();
        Mat smsp = sm * sp;
        out += 0.5 * config.pump_P * (2.0 * sp * r * sm - smsp * r - r * smsp);
    }
    if (config.kappa != 0.0) {
        Mat a = tensor(identity_op(Space::qubit, config.cutoff), annihilation(config.cutoff)).entries;
        Mat ad = a.adjoint();
        Mat num = ad * a;
        out += 0.5 * config.kappa * (2.0 * a * r * ad - num * r - r * num);
    }
    return out;
}

// Internal integrator step from the stiffest rate present.
inline double internal_step(const SystemConfig& config, double dt_sample) {
    double h = std::min(dt_sample, 0.001 / config.g);
    h = std::min(h, 0.1 / std::max({config.kappa, config.pump_P, 1e-30}));
    return h;
}

namespace detail {

// Structure-exploiting RHS evaluation. With H_eff = H - i(P/2)s-s+ - i(kappa/2)a+a
// and M = H_eff rho, hermiticity gives
//   drho/dt = -iM + iM^dagger + P s+ rho s- + kappa a rho a+.
// H_eff is diagonal plus the single Jaynes-Cummings coupling band, so M costs
// O(dim^2) instead of a dense matrix product.
class LindbladWorkspace {
  public:
    explicit LindbladWorkspace(const SystemConfig& config)
        : n_(config.cutoff.n_max),
          dim_(2 * n_),
          pump_(config.pump_P),
          kappa_(config.kappa),
          hd_(dim_),
          coupling_(n_ - 1),
          sq_(n_),
          m_buf_(dim_, dim_) {
        for (int q = 0; q < 2; ++q)
            for (int m = 0; m < n_; ++m) {
                double re = config.omega_a * m + config.omega_sigma * q;
                double im = 0.5 * (config.kappa * m + config.pump_P * (1 - q));
                hd_(q * n_ + m) = cplx(re, -im);
            }
        for (int m = 0; m + 1 < n_; ++m) coupling_(m) = config.g * std::sqrt(m + 1.0);
        for (int m = 0; m < n_; ++m) sq_(m) = std::sqrt(m + 1.0);
    }

    int dim() const { return dim_; }

    void rhs(const Mat& rho, Mat& out) {
        const int n = n_, dim = dim_;
        // M = H_eff * rho, columnwise
        for (int c = 0; c < dim; ++c) {
            const cplx* rc = rho.data() + static_cast<ptrdiff_t>(c) * dim;
            cplx* mc = m_buf_.data() + static_cast<ptrdiff_t>(c) * dim;
            for (int i = 0; i < dim; ++i) mc[i] = hd_(i) * rc[i];
            for (int m = 0; m + 1 < n; ++m) {
                cplx j = coupling_(m);
                mc[m + 1] += j * rc[n + m];
                mc[n + m] += j * rc[m + 1];
            }
        }
        // out = -iM + iM^dagger
        for (int c = 0; c < dim; ++c) {
            cplx* oc = out.data() + static_cast<ptrdiff_t>(c) * dim;
            const cplx* mc = m_buf_.data() + static_cast<ptrdiff_t>(c) * dim;
            for (int i = 0; i < dim; ++i) {
                cplx d = mc[i] - std::conj(m_buf_(c, i));
                oc[i] = cplx(d.imag(), -d.real());  // -i * d
            }
        }
        // pump jump: P * (s+ rho s-) lands the gg block in the ee block
        if (pump_ != 0.0) {
            for (int k = 0; k < n; ++k) {
                const cplx* rc = rho.data() + static_cast<ptrdiff_t>(k) * dim;
                cplx* oc = out.data() + static_cast<ptrdiff_t>(n + k) * dim;
                for (int m = 0; m < n; ++m) oc[n + m] += pump_ * rc[m];
            }
        }
        // leakage jump: kappa * (a rho a+) shifts Fock indices down in every block
        if (kappa_ != 0.0) {
            for (int q2 = 0; q2 < 2; ++q2)
                for (int k = 0; k + 1 < n; ++k) {
                    int cj = q2 * n + k;
                    double sk = kappa_ * sq_(k);
                    const cplx* rc = rho.data() + static_cast<ptrdiff_t>(cj + 1) * dim;
                    cplx* oc = out.data() + static_cast<ptrdiff_t>(cj) * dim;
                    for (int q1 = 0; q1 < 2; ++q1) {
                        int base = q1 * n;
                        for (int m = 0; m + 1 < n; ++m)
                            oc[base + m] += sk * sq_(m) * rc[base + m + 1];
                    }
                }
        }
    }

  private:
    int n_, dim_;
    double pump_, kappa_;
    Vec hd_;
    RVec coupling_, sq_;
    Mat m_buf_;
};

}  // namespace detail

// Integrates the master equation and hands every sampled state to `observer`
// as observer(sample_index, t, rho_matrix). Sampling points land exactly on the
// grid; the internal RK4 step divides each sampling interval evenly and never
// exceeds the stiffness bound from internal_step.
template <typename Observer>
void evolve_observe(const DensityMatrix& rho0, const SystemConfig& config, const TimeGrid& grid,
                    Observer&& observer) {
    config.validate();
    grid.validate();
    if (rho0.space_tag != Space::joint || rho0.dim != config.cutoff.joint_dim())
        throw validation_error("evolve: rho0 must be joint-tagged with dim 2*n_max");

    const int dim = rho0.dim;
    double h_bound = internal_step(config, grid.dt_sample);
    int n_sub = std::max(1, static_cast<int>(std::ceil(grid.dt_sample / h_bound - 1e-12)));
    double h = grid.dt_sample / n_sub;
    if (!(h > 1e-15)) throw invariant_violation("evolve: integrator step underflow");

    detail::LindbladWorkspace ws(config);
    Mat y = rho0.entries;
    Mat k1(dim, dim), k2(dim, dim), k3(dim, dim), k4(dim, dim), tmp(dim, dim);

    const int n_samples = grid.n_samples();
    auto check_sample = [&](int idx, double t, const Mat& state) {
        double herm = (state - state.adjoint()).cwiseAbs().maxCoeff();
        double drift = std::abs(state.trace() - cplx(1.0, 0.0));
        if (herm > 1e-6 || drift > 1e-6) {
            std::ostringstream os;
            os << "evolve: invariant violation at t=" << t << " (sample " << idx
               << "): hermiticity residue " << herm << ", trace drift " << drift;
            throw invariant_violation(os.str());
        }
    };

    check_sample(0, grid.t_start, y);
    observer(0, grid.t_start, static_cast<const Mat&>(y));
    for (int s = 1; s < n_samples; ++s) {
        for (int sub = 0; sub < n_sub; ++sub) {
            ws.rhs(y, k1);
            tmp = y + (0.5 * h) * k1;
            ws.rhs(tmp, k2);
            tmp = y + (0.5 * h) * k2;
            ws.rhs(tmp, k3);
            tmp = y + h * k3;
            ws.rhs(tmp, k4);
            y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        double t = grid.t_start + s * grid.dt_sample;
        check_sample(s, t, y);
        observer(s, t, static_cast<const Mat&>(y));
    }
}

inline Trajectory evolve(const DensityMatrix& rho0, const SystemConfig& config, const TimeGrid& grid) {
    Trajectory traj;
    traj.times.reserve(grid.n_samples());
    traj.states.reserve(grid.n_samples());
    evolve_observe(rho0, config, grid, [&](int, double t, const Mat& state) {
        traj.times.push_back(t);
        traj.states.emplace_back(Space::joint, state);
    });
    return traj;
}

// Closed-system oracle: rho(t) = U rho0 U^dagger with U from full diagonalization
// of H. Pump and leakage rates are ignored; callers pass closed configs.
inline DensityMatrix evolve_exact_closed(const DensityMatrix& rho0, const SystemConfig& config,
                                         double t) {
    if (rho0.space_tag != Space::joint || rho0.dim != config.cutoff.joint_dim())
        throw validation_error("evolve_exact_closed: rho0 must be joint-tagged with dim 2*n_max");
    Eigen::SelfAdjointEigenSolver<Mat> es(hamiltonian(config).entries);
    Vec phases(rho0.dim);
    for (int k = 0; k < rho0.dim; ++k)
        phases(k) = std::exp(cplx(0.0, -es.eigenvalues()(k) * t));
    Mat u = es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
    return DensityMatrix(Space::joint, u * rho0.entries * u.adjoint());
}

namespace detail {
inline Mat kron(const Mat& a, const Mat& b) {
    Mat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}
}  // namespace detail

// Vectorized generator with column stacking: vec(A X B) = (B^T (x) A) vec(X).
inline Mat liouvillian(const SystemConfig& config) {
    config.validate();
    int dim = config.cutoff.joint_dim();
    Mat id = Mat::Identity(dim, dim);
    Mat h = hamiltonian(config).entries;
    Mat lv = cplx(0, 1) * (detail::kron(h.transpose(), id) - detail::kron(id, h));
    auto add_channel = [&](const Mat& c, double rate) {
        if (rate == 0.0) return;
        Mat cdc = c.adjoint() * c;
        lv += 0.5 * rate *
              (2.0 * detail::kron(c.conjugate(), c) - detail::kron(id, cdc) -
               detail::kron(cdc.transpose(), id));
    };
    add_channel(tensor(qubit_lowering().adjoint(), identity_op(Space::field, config.cutoff)).entries,
                config.pump_P);
    add_channel(tensor(identity_op(Space::qubit, config.cutoff), annihilation(config.cutoff)).entries,
                config.kappa);
    return lv;
}

// Steady state as the null vector of the vectorized Liouvillian (dense SVD),
// normalized to unit trace. A degenerate null space is reported through the
// warning field; if the first null vector is traceless the projection of the
// maximally mixed state onto the null space is returned instead.
inline DensityMatrix steady_state(const SystemConfig& config) {
    config.validate();
    if (config.kappa <= 0.0 && config.pump_P <= 0.0)
        throw validation_error("steady_state: requires a dissipative channel (kappa > 0 or pump > 0)");

    const int dim = config.cutoff.joint_dim();
    const int nv = dim * dim;
    Mat lv = liouvillian(config);
    Eigen::BDCSVD<Mat> svd(lv, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    double tol = sv(0) * 1e-9;
    int null_dim = 0;
    for (int k = nv - 1; k >= 0 && sv(k) <= tol; --k) ++null_dim;
    if (null_dim == 0) null_dim = 1;  // the generator always has a fixed point

    std::string warning;
    Vec v = svd.matrixV().col(nv - 1);
    Mat rho = Eigen::Map<const Mat>(v.data(), dim, dim);
    rho = 0.5 * (rho + rho.adjoint()).eval();
    cplx tr = rho.trace();
    if (null_dim > 1) {
        warning = "steady_state: degenerate null space (dimension " + std::to_string(null_dim) +
                  "); returned a deterministic unit-trace element";
        // Deterministic representative: the null-space projection of the
        // maximally mixed state (positive whenever the null space is spanned
        // by a fixed-point algebra, and basis-independent).
        Mat mixed = Mat::Identity(dim, dim) / static_cast<double>(dim);
        Eigen::Map<const Vec> w(mixed.data(), nv);
        Vec proj = Vec::Zero(nv);
        for (int k = nv - null_dim; k < nv; ++k) {
            Vec basis = svd.matrixV().col(k);
            proj += basis * basis.dot(w);
        }
        if (proj.norm() > 1e-12) {
            rho = Eigen::Map<const Mat>(proj.data(), dim, dim);
            rho = 0.5 * (rho + rho.adjoint()).eval();
            tr = rho.trace();
        }
    }
    if (std::abs(tr) < 1e-10)
        throw invariant_violation("steady_state: null vector has vanishing trace");
    rho /= tr;

    DensityMatrix out(Space::joint, std::move(rho));
    out.warning = warning;
    double residual = lindblad_rhs(out, config).cwiseAbs().maxCoeff();
    if (residual > 1e-10)
        throw invariant_violation("steady_state: generator residual " + std::to_string(residual));
    return out;
}

}  // namespace triphoton
