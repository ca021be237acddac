#pragma once

#include "qmeas/exact.hpp"
#include "qmeas/hilbert.hpp"
#include "qmeas/pointer.hpp"

namespace qmeas {

/// Eigendecomposition of a Hermitian system operator, validated against
/// reconstruction and orthonormality residuals.
struct SpectralDecomposition {
    Eigen::VectorXd eigenvalues;
    Matrix eigenvectors; // columns

    static SpectralDecomposition of(const SystemOperator& a);
};

/// Evolves |psi>|phi> under exp(-i*gamma*A*p/hbar) by translating the pointer
/// by gamma*lambda on each eigenbranch of A. Works for any Hermitian A; no
/// idempotency shortcut is involved, which makes it an independent reference
/// for the expanded-form path.
JointState evolve_joint(const SystemState& psi, const PointerState& phi,
                        const SystemOperator& a, double gamma);

/// Mean of a pointer-only observable over the reduced pointer distribution.
double oracle_ps_mean(const JointState& joint, const PointerObservable& m);

/// Full pointer moments of the reduced pointer distribution of a joint state.
MomentReport oracle_ps_moments(const JointState& joint, const PointerObservable& m);

/// Pointer state conditioned on finding the system in |psi_f>, with its
/// global phase intact, plus the pre-normalization amplitude norm.
struct PostSelected {
    PointerState pointer;
    double norm;
};

PostSelected oracle_post_select(const JointState& joint, const SystemState& psi_f);

} // namespace qmeas
