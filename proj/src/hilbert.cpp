#include "qmeas/hilbert.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace qmeas {

SystemState::SystemState(Vector amplitudes) : amplitudes_(std::move(amplitudes)) {
    if (amplitudes_.size() < 2)
        throw DimensionMismatch("system state needs dimension >= 2, got " +
                                std::to_string(amplitudes_.size()));
    const double n = amplitudes_.norm();
    if (n < 1e-14) throw DegenerateInput("system state has zero norm");
    amplitudes_ /= n;
}

SystemState SystemState::basis_vector(int dim, int index) {
    Vector v = Vector::Zero(dim);
    v[index] = 1.0;
    return SystemState(std::move(v));
}

Complex inner(const SystemState& a, const SystemState& b) {
    if (a.dim() != b.dim())
        throw DimensionMismatch("inner product of states with dims " +
                                std::to_string(a.dim()) + " and " + std::to_string(b.dim()));
    return a.amplitudes().dot(b.amplitudes()); // Eigen's dot conjugates the left factor
}

SystemOperator::SystemOperator(Matrix matrix) : matrix_(std::move(matrix)) {
    if (matrix_.rows() != matrix_.cols() || matrix_.rows() < 2)
        throw DimensionMismatch("operator must be square with dimension >= 2");
    const double herm = (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff();
    if (herm >= kHermiticityTol)
        throw NotHermitian("operator is not Hermitian, residual " + std::to_string(herm));
}

double SystemOperator::idempotency_residual() const {
    return (matrix_ * matrix_ - matrix_).cwiseAbs().maxCoeff();
}

Projector::Projector(Matrix matrix) : SystemOperator(std::move(matrix)) {
    const double idem = idempotency_residual();
    if (idem >= kIdempotencyTol)
        throw NotIdempotent("projector fails A^2 = A, residual " + std::to_string(idem));
    Eigen::SelfAdjointEigenSolver<Matrix> solver(this->matrix(), Eigen::EigenvaluesOnly);
    for (int k = 0; k < dim(); ++k) {
        const double lambda = solver.eigenvalues()[k];
        if (std::min(std::abs(lambda), std::abs(lambda - 1.0)) >= kIdempotencyTol)
            throw NotIdempotent("projector eigenvalue " + std::to_string(lambda) +
                                " is not in {0,1}");
    }
}

Projector make_projector(const std::vector<SystemState>& basis_vectors) {
    if (basis_vectors.empty()) throw DegenerateInput("projector basis is empty");
    const int d = basis_vectors.front().dim();

    // Modified Gram-Schmidt with rank tolerance 1e-10.
    std::vector<Vector> ortho;
    ortho.reserve(basis_vectors.size());
    for (const auto& state : basis_vectors) {
        if (state.dim() != d)
            throw DimensionMismatch("projector basis vectors have mixed dimensions");
        Vector v = state.amplitudes();
        for (const auto& u : ortho) v -= u.dot(v) * u;
        // second pass for numerical orthogonality
        for (const auto& u : ortho) v -= u.dot(v) * u;
        const double n = v.norm();
        if (n < 1e-10)
            throw DegenerateInput("projector basis vectors are linearly dependent");
        ortho.push_back(v / n);
    }

    Matrix a = Matrix::Zero(d, d);
    for (const auto& u : ortho) a += u * u.adjoint();
    // symmetrize away roundoff so the Hermiticity check cannot trip
    a = 0.5 * (a + a.adjoint().eval());
    return Projector(std::move(a));
}

double expectation(const SystemState& psi, const SystemOperator& op) {
    if (psi.dim() != op.dim())
        throw DimensionMismatch("state dim " + std::to_string(psi.dim()) +
                                " vs operator dim " + std::to_string(op.dim()));
    const Complex v = psi.amplitudes().dot(op.matrix() * psi.amplitudes());
    return v.real();
}

WeakValue weak_value(const SystemState& psi_i, const SystemState& psi_f,
                     const SystemOperator& op, double overlap_tolerance) {
    if (psi_i.dim() != op.dim() || psi_f.dim() != op.dim())
        throw DimensionMismatch("weak value: state/operator dimensions differ");
    const Complex overlap = inner(psi_f, psi_i);
    if (std::abs(overlap) <= overlap_tolerance)
        throw OrthogonalPostSelection("post-selection overlap magnitude " +
                                      std::to_string(std::abs(overlap)) +
                                      " is below tolerance");
    const Complex numerator = psi_f.amplitudes().dot(op.matrix() * psi_i.amplitudes());
    return WeakValue{numerator / overlap};
}

PPSContext pps_context(const SystemState& psi_i, const SystemState& psi_f,
                       const SystemOperator& op, double overlap_tolerance) {
    const WeakValue aw = weak_value(psi_i, psi_f, op, overlap_tolerance);
    const Complex overlap = inner(psi_f, psi_i);
    double chi = std::arg(overlap);
    if (chi <= -3.14159265358979323846) chi += 2.0 * 3.14159265358979323846;
    return PPSContext{psi_i, psi_f, overlap, chi, aw};
}

} // namespace qmeas
