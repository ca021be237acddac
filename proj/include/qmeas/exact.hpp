#pragma once

#include <Eigen/Dense>

#include "qmeas/hilbert.hpp"
#include "qmeas/pointer.hpp"

namespace qmeas {

/// One measurement setup: coupling strength, measured projector, initial pointer.
/// gamma may be zero or large; nothing here assumes weak coupling.
struct MeasurementConfig {
    MeasurementConfig(double gamma_, Projector op_, PointerState phi0_);

    double gamma;
    Projector op;
    PointerState phi0;
};

/// Entangled system (x) pointer state, stored as a d x N complex array whose
/// row k is the pointer amplitude attached to system basis state |k>.
class JointState {
public:
    JointState(PointerGrid grid, Matrix amplitudes);

    int system_dim() const { return static_cast<int>(amplitudes_.rows()); }
    const Matrix& amplitudes() const { return amplitudes_; }
    const PointerGrid& grid() const { return grid_; }
    double norm() const;

private:
    PointerGrid grid_;
    Matrix amplitudes_;
};

/// Applies the interaction operator in its idempotent-expanded form
/// (1 - A + A S) to |psi>|phi>: the state splits into an unshifted branch
/// (1-A)|psi> (x) |phi> and a shifted branch A|psi> (x) S|phi>.
JointState interaction_apply(const SystemState& psi, const PointerState& phi,
                             const Projector& a, double gamma);

/// Pointer position distribution after a pre-selected-only measurement:
/// (1 - <A>)|phi(q)|^2 + <A>|phi(q - gamma)|^2. No interference cross term.
Eigen::VectorXd ps_profile(const SystemState& psi, const PointerState& phi,
                           const Projector& a, double gamma);

/// <M> for the pre-selected-only pointer:
/// (1 - <A>)<phi|M|phi> + <A><phi|S'MS|phi>.
double ps_mean(const PointerObservable& m, const SystemState& psi,
               const PointerState& phi, const Projector& a, double gamma);

/// Variance of M for the pre-selected-only pointer.
double ps_variance(const PointerObservable& m, const SystemState& psi,
                   const PointerState& phi, const Projector& a, double gamma);

/// Post-selected pointer state with its Pancharatnam phase chi and the
/// normalization constant N of the unnormalized combination
/// (1 - A_w + A_w S)|phi>. The global phase e^{i chi} is retained.
struct PPSPointerState {
    PointerState pointer;
    double chi;
    double normalization_n;
};

/// |Psi> = (e^{i chi} / N)(1 - A_w + A_w S)|phi> with
/// N^2 = |1-A_w|^2 + |A_w|^2 + 2 Re[A_w (1 - A_w*) <phi|S|phi>].
/// A_w is recomputed from (ctx.psi_i, ctx.psi_f, a) so the context and the
/// measured projector cannot drift apart.
PPSPointerState pps_pointer_state(const PPSContext& ctx, const Projector& a,
                                  const PointerState& phi, double gamma);

/// Pointer position distribution after post-selection; unlike the PS case it
/// carries the interference cross term 2 Re[A_w (1-A_w*) phi*(q) phi(q-gamma)].
Eigen::VectorXd pps_profile(const PPSContext& ctx, const Projector& a,
                            const PointerState& phi, double gamma);

/// <M> for the post-selected pointer (momentum is generally not conserved here).
double pps_mean(const PointerObservable& m, const PPSContext& ctx,
                const Projector& a, const PointerState& phi, double gamma);

/// Variance of M for the post-selected pointer.
double pps_variance(const PointerObservable& m, const PPSContext& ctx,
                    const Projector& a, const PointerState& phi, double gamma);

} // namespace qmeas
