#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "qmeas/errors.hpp"

namespace qmeas {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;

inline constexpr double kHermiticityTol = 1e-12;
inline constexpr double kIdempotencyTol = 1e-10;
inline constexpr double kDefaultOverlapTol = 1e-10;

/// Normalized state vector on a d-dimensional system Hilbert space, d >= 2.
class SystemState {
public:
    explicit SystemState(Vector amplitudes);

    static SystemState basis_vector(int dim, int index);

    int dim() const { return static_cast<int>(amplitudes_.size()); }
    const Vector& amplitudes() const { return amplitudes_; }
    Complex operator[](int k) const { return amplitudes_[k]; }

private:
    Vector amplitudes_;
};

/// <a|b>
Complex inner(const SystemState& a, const SystemState& b);

/// Hermitian operator on the system space.
class SystemOperator {
public:
    explicit SystemOperator(Matrix matrix);

    int dim() const { return static_cast<int>(matrix_.rows()); }
    const Matrix& matrix() const { return matrix_; }

    /// Max-norm of A^2 - A; zero for exact projectors.
    double idempotency_residual() const;
    bool is_projector(double tol = kIdempotencyTol) const {
        return idempotency_residual() < tol;
    }

private:
    Matrix matrix_;
};

/// Hermitian idempotent operator (A^2 = A, spectrum in {0,1}).
class Projector : public SystemOperator {
public:
    explicit Projector(Matrix matrix);
};

/// Builds the projector onto the span of the given vectors.
/// Vectors are orthonormalized internally (modified Gram-Schmidt).
Projector make_projector(const std::vector<SystemState>& basis_vectors);

/// <psi|A|psi>; lies in [0,1] for projectors.
double expectation(const SystemState& psi, const SystemOperator& op);

/// A_w = <psi_f|A|psi_i> / <psi_f|psi_i>. Complex in general; Re A_w may lie
/// far outside the spectrum of A.
struct WeakValue {
    Complex value;
    double re() const { return value.real(); }
    double im() const { return value.imag(); }
};

WeakValue weak_value(const SystemState& psi_i, const SystemState& psi_f,
                     const SystemOperator& op,
                     double overlap_tolerance = kDefaultOverlapTol);

/// Pre/post-selection data: overlap, its Pancharatnam phase chi = arg<psi_f|psi_i>
/// on the principal branch (-pi, pi], and the weak value of the measured operator.
struct PPSContext {
    SystemState psi_i;
    SystemState psi_f;
    Complex overlap;
    double chi;
    WeakValue a_w;
};

PPSContext pps_context(const SystemState& psi_i, const SystemState& psi_f,
                       const SystemOperator& op,
                       double overlap_tolerance = kDefaultOverlapTol);

} // namespace qmeas
