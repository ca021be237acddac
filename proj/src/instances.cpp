#include "qmeas/instances.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <cmath>

namespace qmeas {

SystemState random_state(Rng& rng, int dim) {
    Vector v(dim);
    for (int k = 0; k < dim; ++k) v[k] = rng.normal_complex();
    return SystemState(std::move(v));
}

Matrix random_unitary(Rng& rng, int dim) {
    Matrix g(dim, dim);
    for (int r = 0; r < dim; ++r)
        for (int c = 0; c < dim; ++c) g(r, c) = rng.normal_complex();
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ();
    // fix the phase convention so Q is uniquely determined by G
    const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int c = 0; c < dim; ++c) {
        const Complex diag = r(c, c);
        if (std::abs(diag) > 0.0) q.col(c) *= diag / std::abs(diag);
    }
    return q;
}

Projector random_projector(Rng& rng, int dim, int rank) {
    const Matrix u = random_unitary(rng, dim);
    Matrix a = Matrix::Zero(dim, dim);
    for (int c = 0; c < rank; ++c) a += u.col(c) * u.col(c).adjoint();
    a = 0.5 * (a + a.adjoint().eval());
    return Projector(std::move(a));
}

SystemOperator random_hermitian(Rng& rng, int dim, double scale) {
    Matrix g(dim, dim);
    for (int r = 0; r < dim; ++r)
        for (int c = 0; c < dim; ++c) g(r, c) = rng.normal_complex();
    Matrix h = 0.5 * (g + g.adjoint().eval());
    // normalize the spectral radius to `scale` so eigenbranch pointer shifts
    // stay comparable to the projector case (eigenvalues in {0,1})
    Eigen::SelfAdjointEigenSolver<Matrix> solver(h, Eigen::EigenvaluesOnly);
    const double radius = solver.eigenvalues().cwiseAbs().maxCoeff();
    if (radius > 0.0) h *= scale / radius;
    return SystemOperator(std::move(h));
}

PointerState random_wavepacket(Rng& rng, const PointerGrid& grid) {
    const int humps = 2 + static_cast<int>(rng.integer(2));
    Vector amp = Vector::Zero(grid.n());
    for (int h = 0; h < humps; ++h) {
        const double center = rng.uniform(-2.0, 2.0);
        const double sigma = rng.uniform(0.5, 1.5);
        const double boost = rng.uniform(-2.0, 2.0);
        const double curvature = rng.uniform(-0.3, 0.3);
        const Complex weight = rng.normal_complex();
        for (int j = 0; j < grid.n(); ++j) {
            const double x = grid.q(j) - center;
            const double phase = boost * grid.q(j) / grid.hbar() + curvature * x * x;
            amp[j] += weight * std::exp(-x * x / (4.0 * sigma * sigma)) *
                      std::exp(Complex(0.0, phase));
        }
    }
    long double s = 0.0L;
    for (int j = 0; j < grid.n(); ++j) s += std::norm(amp[j]);
    amp /= std::sqrt(static_cast<double>(s * static_cast<long double>(grid.dq())));
    return PointerState(grid, std::move(amp));
}

PsInstance random_ps_instance(Rng& rng) {
    const int dim = 2 + static_cast<int>(rng.integer(3));
    const int rank = 1 + static_cast<int>(rng.integer(dim));
    const double gamma = rng.uniform(0.01, 5.0);
    return PsInstance{random_state(rng, dim), random_projector(rng, dim, rank), gamma};
}

PpsInstance random_pps_instance(Rng& rng, double min_overlap) {
    const int dim = 2 + static_cast<int>(rng.integer(3));
    const int rank = 1 + static_cast<int>(rng.integer(dim));
    const double gamma = rng.uniform(0.01, 5.0);
    const SystemState psi_i = random_state(rng, dim);
    for (;;) {
        const SystemState psi_f = random_state(rng, dim);
        if (std::abs(inner(psi_f, psi_i)) >= min_overlap)
            return PpsInstance{psi_i, psi_f, random_projector(rng, dim, rank), gamma};
    }
}

} // namespace qmeas
