#pragma once

// Displaced-parity Wigner function of the reduced field state,
// W(alpha) = 2 Tr[D(-alpha) rho D(alpha) P], so the phase-space integral of W
// over dx dp equals pi (no 1/pi prefactor in this convention).

#include <cmath>
#include <string>
#include <vector>

#include <unsupported/Eigen/MatrixFunctions>

#include "triphoton/common.hpp"
#include "triphoton/hilbert.hpp"

namespace triphoton {

struct PhaseSpaceGrid {
    double x_min = -4.0, x_max = 4.0;
    double p_min = -4.0, p_max = 4.0;
    int n_x = 101, n_p = 101;

    void validate() const {
        if (!(x_max > x_min) || !(p_max > p_min))
            throw validation_error("PhaseSpaceGrid: axis extents must be increasing");
        if (n_x < 2 || n_p < 2)
            throw validation_error("PhaseSpaceGrid: need at least 2 points per axis");
    }
    std::vector<double> xs() const {
        std::vector<double> v(n_x);
        for (int i = 0; i < n_x; ++i) v[i] = x_min + (x_max - x_min) * i / (n_x - 1);
        return v;
    }
    std::vector<double> ps() const {
        std::vector<double> v(n_p);
        for (int j = 0; j < n_p; ++j) v[j] = p_min + (p_max - p_min) * j / (n_p - 1);
        return v;
    }
    static PhaseSpaceGrid square(double extent, int points) {
        PhaseSpaceGrid g{-extent, extent, -extent, extent, points, points};
        g.validate();
        return g;
    }
};

struct WignerGrid {
    PhaseSpaceGrid grid;
    RMat values;  // n_x rows (x index), n_p columns (p index)
    int evaluation_cutoff = 0;
    double max_imag_residue = 0.0;

    double integral() const {
        double dx = (grid.x_max - grid.x_min) / (grid.n_x - 1);
        double dp = (grid.p_max - grid.p_min) / (grid.n_p - 1);
        return values.sum() * dx * dp;
    }
};

inline OperatorMatrix parity(FockCutoff cutoff) {
    Mat p = Mat::Zero(cutoff.n_max, cutoff.n_max);
    for (int m = 0; m < cutoff.n_max; ++m) p(m, m) = (m % 2 == 0) ? 1.0 : -1.0;
    return OperatorMatrix(Space::field, p);
}

// exp(alpha a+ - conj(alpha) a) on the truncated space. Accurate only while
// the displaced state stays well inside the cutoff, hence the validity domain.
inline OperatorMatrix displacement(cplx alpha, FockCutoff cutoff) {
    Mat a = annihilation(cutoff).entries;
    Mat gen = alpha * a.adjoint() - std::conj(alpha) * a;
    OperatorMatrix out(Space::field, gen.exp());
    if (std::norm(alpha) > cutoff.n_max / 4.0)
        out.warning = "displacement: |alpha|^2 = " + std::to_string(std::norm(alpha)) +
                      " exceeds the validity domain n_max/4 = " +
                      std::to_string(cutoff.n_max / 4.0);
    return out;
}

namespace detail {

// Upper bound on |Im W| from the non-Hermitian remainder of rho:
// |Tr[D^-1 A D P]| <= ||A||_1 for the anti-Hermitian part A, and W carries
// a factor 2.
inline double wigner_imag_residue(const DensityMatrix& rho) {
    Mat anti = 0.5 * (rho.entries - rho.entries.adjoint());
    if (anti.cwiseAbs().maxCoeff() == 0.0) return 0.0;
    Eigen::SelfAdjointEigenSolver<Mat> es(cplx(0, 1) * anti, Eigen::EigenvaluesOnly);
    return 2.0 * es.eigenvalues().cwiseAbs().sum();
}

}  // namespace detail

// Evaluates displaced parities in the eigenbasis of the Hermitian generator
// i(a+ - a), which is phase-equivalent to a real symmetric tridiagonal matrix
// with off-diagonals sqrt(m+1). One eigendecomposition serves every grid
// point: for alpha = r e^{i phi},
//   D(alpha) = Psi V e^{-i r mu} V^T Psi^dagger,  Psi = diag(e^{i m (phi+pi/2)}),
// and W contributions reduce to four real matrix-vector products per state
// component. The evaluation cutoff is chosen large enough that displaced
// support never hits the truncation edge.
class DisplacedParityEngine {
  public:
    explicit DisplacedParityEngine(int n_eval) : n_(n_eval) {
        if (n_ < 2) throw validation_error("DisplacedParityEngine: cutoff must be >= 2");
        RVec diag = RVec::Zero(n_);
        RVec sub(n_ - 1);
        for (int m = 0; m + 1 < n_; ++m) sub(m) = std::sqrt(m + 1.0);
        Eigen::SelfAdjointEigenSolver<RMat> es;
        es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
        mu_ = es.eigenvalues();
        v_ = es.eigenvectors();
        signs_.resize(n_);
        for (int k = 0; k < n_; ++k) signs_(k) = (k % 2 == 0) ? 1.0 : -1.0;
    }

    int cutoff() const { return n_; }

    // Spectral decomposition of the (hermitized) state; components with
    // relative weight below weight_tol are dropped.
    void set_state(const DensityMatrix& rho_field, double weight_tol = 1e-14) {
        if (rho_field.space_tag != Space::field)
            throw validation_error("DisplacedParityEngine: state must be field-tagged");
        if (rho_field.dim > n_)
            throw validation_error("DisplacedParityEngine: state dimension exceeds cutoff");
        Mat herm = 0.5 * (rho_field.entries + rho_field.entries.adjoint());
        Eigen::SelfAdjointEigenSolver<Mat> es(herm);
        double wmax = es.eigenvalues().cwiseAbs().maxCoeff();
        weights_.clear();
        components_.clear();
        for (int s = 0; s < es.eigenvalues().size(); ++s) {
            if (std::abs(es.eigenvalues()(s)) <= weight_tol * wmax) continue;
            weights_.push_back(es.eigenvalues()(s));
            components_.push_back(es.eigenvectors().col(s));
        }
        dim_ = rho_field.dim;
    }

    double evaluate(cplx alpha) const {
        double r = std::abs(alpha);
        double phi = std::arg(alpha);
        if (r == 0.0) {  // D(0) = I: the parity expectation is a plain diagonal sum
            double total = 0.0;
            for (size_t s = 0; s < weights_.size(); ++s)
                for (int m = 0; m < dim_; ++m) total += weights_[s] * signs_(m) * std::norm(components_[s](m));
            return 2.0 * total;
        }
        RVec pc(n_), ps(n_);
        for (int k = 0; k < n_; ++k) {
            pc(k) = std::cos(r * mu_(k));
            ps(k) = std::sin(r * mu_(k));
        }
        RVec wr(dim_), wi(dim_);
        double total = 0.0;
        for (size_t s = 0; s < weights_.size(); ++s) {
            for (int m = 0; m < dim_; ++m) {
                cplx wm = std::polar(1.0, -m * (phi + 0.5 * pi)) * components_[s](m);
                wr(m) = wm.real();
                wi(m) = wm.imag();
            }
            RVec yr = v_.topRows(dim_).transpose() * wr;
            RVec yi = v_.topRows(dim_).transpose() * wi;
            RVec zr = v_ * (yr.cwiseProduct(pc) - yi.cwiseProduct(ps));
            RVec zi = v_ * (yr.cwiseProduct(ps) + yi.cwiseProduct(pc));
            total += weights_[s] * signs_.dot(zr.cwiseAbs2() + zi.cwiseAbs2());
        }
        return 2.0 * total;
    }

    // Full displacement matrix in this cutoff, for cross-checks against the
    // direct matrix exponential.
    Mat displacement_matrix(cplx alpha) const {
        double r = std::abs(alpha);
        double phi = std::arg(alpha);
        Vec psi(n_), ph(n_);
        for (int m = 0; m < n_; ++m) psi(m) = std::polar(1.0, m * (phi + 0.5 * pi));
        for (int k = 0; k < n_; ++k) ph(k) = std::polar(1.0, -r * mu_(k));
        Mat core = v_.cast<cplx>() * ph.asDiagonal() * v_.transpose().cast<cplx>();
        return psi.asDiagonal() * core * psi.conjugate().asDiagonal();
    }

  private:
    int n_ = 0;
    int dim_ = 0;
    RVec mu_;
    RMat v_;
    RVec signs_;
    std::vector<double> weights_;
    std::vector<Vec> components_;
};

namespace detail {

inline int wigner_evaluation_cutoff(int state_dim, double max_alpha_sq) {
    int needed = static_cast<int>(std::ceil(4.0 * max_alpha_sq)) + 8;
    return std::max(state_dim, needed);
}

}  // namespace detail

inline double wigner_point(const DensityMatrix& rho_field, cplx alpha) {
    if (rho_field.space_tag != Space::field)
        throw validation_error("wigner_point: state must be field-tagged");
    DisplacedParityEngine engine(
        detail::wigner_evaluation_cutoff(rho_field.dim, std::norm(alpha)));
    engine.set_state(rho_field);
    return engine.evaluate(alpha);
}

inline WignerGrid wigner_grid(const DensityMatrix& rho_field, const PhaseSpaceGrid& grid) {
    if (rho_field.space_tag != Space::field)
        throw validation_error("wigner_grid: state must be field-tagged");
    grid.validate();
    double rx = std::max(std::abs(grid.x_min), std::abs(grid.x_max));
    double rp = std::max(std::abs(grid.p_min), std::abs(grid.p_max));
    WignerGrid out;
    out.grid = grid;
    out.evaluation_cutoff = detail::wigner_evaluation_cutoff(rho_field.dim, rx * rx + rp * rp);
    out.max_imag_residue = detail::wigner_imag_residue(rho_field);
    DisplacedParityEngine engine(out.evaluation_cutoff);
    engine.set_state(rho_field);
    std::vector<double> xs = grid.xs(), ps = grid.ps();
    out.values.resize(grid.n_x, grid.n_p);
    for (int i = 0; i < grid.n_x; ++i)
        for (int j = 0; j < grid.n_p; ++j)
            out.values(i, j) = engine.evaluate(cplx(xs[i], ps[j]));
    return out;
}

}  // namespace triphoton
