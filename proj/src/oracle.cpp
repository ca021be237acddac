#include "qmeas/oracle.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace qmeas {

namespace {

constexpr double kSpectralTol = 1e-10;
constexpr double kSuccessFloor = 1e-20;

/// Accumulates sum_k <f(row_k)|g(row_k)> dq over the system index.
template <typename RowFunc>
Complex sum_over_rows(const JointState& joint, RowFunc&& pair_value) {
    long double re = 0.0L, im = 0.0L;
    for (int k = 0; k < joint.system_dim(); ++k) {
        const Complex v = pair_value(Vector(joint.amplitudes().row(k).transpose()));
        re += v.real();
        im += v.imag();
    }
    return {static_cast<double>(re), static_cast<double>(im)};
}

} // namespace

SpectralDecomposition SpectralDecomposition::of(const SystemOperator& a) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(a.matrix());
    if (solver.info() != Eigen::Success)
        throw Error("eigendecomposition failed");
    SpectralDecomposition d{solver.eigenvalues(), solver.eigenvectors()};

    const Matrix recon = d.eigenvectors *
                         d.eigenvalues.asDiagonal().toDenseMatrix().cast<Complex>() *
                         d.eigenvectors.adjoint();
    const double recon_res = (recon - a.matrix()).cwiseAbs().maxCoeff();
    const double ortho_res =
        (d.eigenvectors.adjoint() * d.eigenvectors - Matrix::Identity(a.dim(), a.dim()))
            .cwiseAbs()
            .maxCoeff();
    if (recon_res >= kSpectralTol || ortho_res >= kSpectralTol)
        throw Error("spectral decomposition residual too large (reconstruction " +
                    std::to_string(recon_res) + ", orthonormality " +
                    std::to_string(ortho_res) + ")");
    return d;
}

JointState evolve_joint(const SystemState& psi, const PointerState& phi,
                        const SystemOperator& a, double gamma) {
    if (psi.dim() != a.dim())
        throw DimensionMismatch("evolve_joint: state dim " + std::to_string(psi.dim()) +
                                " vs operator dim " + std::to_string(a.dim()));
    const SpectralDecomposition spectral = SpectralDecomposition::of(a);
    const Vector eigen_coeffs = spectral.eigenvectors.adjoint() * psi.amplitudes();

    Matrix joint = Matrix::Zero(psi.dim(), phi.grid().n());
    for (int branch = 0; branch < psi.dim(); ++branch) {
        // translate throws GridContainment if gamma*lambda pushes the packet out
        const PointerState shifted =
            translate(phi, gamma * spectral.eigenvalues[branch]);
        joint += (eigen_coeffs[branch] * spectral.eigenvectors.col(branch)) *
                 shifted.amplitudes().transpose();
    }
    return JointState(phi.grid(), std::move(joint));
}

double oracle_ps_mean(const JointState& joint, const PointerObservable& m) {
    const PointerGrid& grid = joint.grid();
    return sum_over_rows(joint, [&](const Vector& row) {
               return grid_inner(grid, row, m.apply(grid, row));
           })
        .real();
}

MomentReport oracle_ps_moments(const JointState& joint, const PointerObservable& m) {
    const PointerGrid& grid = joint.grid();
    const auto q = PointerObservable::position();
    const auto p = PointerObservable::momentum();

    MomentReport r;
    r.mean_q = oracle_ps_mean(joint, q);
    r.mean_p = oracle_ps_mean(joint, p);

    const double mean_m = oracle_ps_mean(joint, m);
    double q2 = 0, p2 = 0;
    Complex qp{0, 0}, mp{0, 0};
    for (int k = 0; k < joint.system_dim(); ++k) {
        const Vector row = joint.amplitudes().row(k).transpose();
        const Vector q_row = q.apply(grid, row);
        const Vector p_row = p.apply(grid, row);
        const Vector m_row = m.apply(grid, row);
        q2 += grid_inner(grid, q_row, q_row).real();
        p2 += grid_inner(grid, p_row, p_row).real();
        qp += grid_inner(grid, q_row, p_row);
        mp += grid_inner(grid, m_row, p_row);
    }
    r.var_q = q2 - r.mean_q * r.mean_q;
    r.var_p = p2 - r.mean_p * r.mean_p;
    r.cov_qp = qp.real() - r.mean_q * r.mean_p;
    r.ccv_mp = mp - mean_m * r.mean_p;
    r.anticomm_mean = 2.0 * mp.real();
    return r;
}

PostSelected oracle_post_select(const JointState& joint, const SystemState& psi_f) {
    if (psi_f.dim() != joint.system_dim())
        throw DimensionMismatch("post-selection state dim does not match joint state");
    const Vector unnormalized =
        joint.amplitudes().transpose() * psi_f.amplitudes().conjugate();
    long double s = 0.0L;
    for (int j = 0; j < joint.grid().n(); ++j) s += std::norm(unnormalized[j]);
    const double success =
        static_cast<double>(s * static_cast<long double>(joint.grid().dq()));
    if (success <= kSuccessFloor)
        throw PostSelectionFailure("post-selection success probability " +
                                   std::to_string(success) + " underflows");
    const double norm = std::sqrt(success);
    return PostSelected{PointerState(joint.grid(), unnormalized / norm), norm};
}

} // namespace qmeas
