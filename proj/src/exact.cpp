#include "qmeas/exact.hpp"

#include <cmath>

namespace qmeas {

namespace {

constexpr double kJointNormTol = 1e-10;
constexpr double kSuccessFloor = 1e-20;

void check_dims(const SystemState& psi, const SystemOperator& a) {
    if (psi.dim() != a.dim())
        throw DimensionMismatch("system state dim " + std::to_string(psi.dim()) +
                                " vs operator dim " + std::to_string(a.dim()));
}

Complex recompute_weak_value(const PPSContext& ctx, const SystemOperator& a) {
    return weak_value(ctx.psi_i, ctx.psi_f, a).value;
}

/// N^2 of the unnormalized combination (1 - A_w + A_w S)|phi>, with
/// <phi|S|phi> evaluated by grid quadrature.
double pps_norm_squared(Complex aw, const PointerState& phi,
                        const PointerState& phi_shifted) {
    const Complex s_mean =
        grid_inner(phi.grid(), phi.amplitudes(), phi_shifted.amplitudes());
    const Complex cross = aw * (1.0 - std::conj(aw)) * s_mean;
    return std::norm(1.0 - aw) + std::norm(aw) + 2.0 * cross.real();
}

} // namespace

MeasurementConfig::MeasurementConfig(double gamma_, Projector op_, PointerState phi0_)
    : gamma(gamma_), op(std::move(op_)), phi0(std::move(phi0_)) {
    if (!std::isfinite(gamma))
        throw Error("measurement coupling strength must be finite");
}

JointState::JointState(PointerGrid grid, Matrix amplitudes)
    : grid_(std::move(grid)), amplitudes_(std::move(amplitudes)) {
    if (amplitudes_.cols() != grid_.n())
        throw DimensionMismatch("joint state columns do not match grid size");
    if (amplitudes_.rows() < 2)
        throw DimensionMismatch("joint state needs system dimension >= 2");
    const double n = norm();
    if (std::abs(n - 1.0) > kJointNormTol)
        throw Error("joint state not normalized: |norm - 1| = " +
                    std::to_string(std::abs(n - 1.0)));
}

double JointState::norm() const {
    long double s = 0.0L;
    for (int k = 0; k < amplitudes_.rows(); ++k)
        for (int j = 0; j < amplitudes_.cols(); ++j) s += std::norm(amplitudes_(k, j));
    return std::sqrt(static_cast<double>(s * static_cast<long double>(grid_.dq())));
}

JointState interaction_apply(const SystemState& psi, const PointerState& phi,
                             const Projector& a, double gamma) {
    check_dims(psi, a);
    const int d = psi.dim();
    const Vector shifted_branch = a.matrix() * psi.amplitudes(); // A|psi>
    const Vector stay_branch = psi.amplitudes() - shifted_branch; // (1-A)|psi>
    const PointerState phi_shifted = translate(phi, gamma);

    Matrix joint(d, phi.grid().n());
    for (int k = 0; k < d; ++k)
        joint.row(k) = stay_branch[k] * phi.amplitudes().transpose() +
                       shifted_branch[k] * phi_shifted.amplitudes().transpose();
    return JointState(phi.grid(), std::move(joint));
}

Eigen::VectorXd ps_profile(const SystemState& psi, const PointerState& phi,
                           const Projector& a, double gamma) {
    check_dims(psi, a);
    const double weight = expectation(psi, a);
    const PointerState phi_shifted = translate(phi, gamma);
    Eigen::VectorXd profile(phi.grid().n());
    for (int j = 0; j < phi.grid().n(); ++j)
        profile[j] = (1.0 - weight) * std::norm(phi.amplitudes()[j]) +
                     weight * std::norm(phi_shifted.amplitudes()[j]);
    return profile;
}

double ps_mean(const PointerObservable& m, const SystemState& psi,
               const PointerState& phi, const Projector& a, double gamma) {
    check_dims(psi, a);
    const double weight = expectation(psi, a);
    const PointerState phi_shifted = translate(phi, gamma);
    return (1.0 - weight) * observable_mean(phi, m) +
           weight * observable_mean(phi_shifted, m);
}

double ps_variance(const PointerObservable& m, const SystemState& psi,
                   const PointerState& phi, const Projector& a, double gamma) {
    check_dims(psi, a);
    const double weight = expectation(psi, a);
    const PointerState phi_shifted = translate(phi, gamma);
    const PointerGrid& grid = phi.grid();

    auto mean_and_square = [&](const PointerState& state, double& mean, double& square) {
        const Vector mv = m.apply(grid, state.amplitudes());
        mean = grid_inner(grid, state.amplitudes(), mv).real();
        square = grid_inner(grid, mv, mv).real();
    };
    double mean0 = 0, sq0 = 0, mean1 = 0, sq1 = 0;
    mean_and_square(phi, mean0, sq0);
    mean_and_square(phi_shifted, mean1, sq1);
    const double mean = (1.0 - weight) * mean0 + weight * mean1;
    const double square = (1.0 - weight) * sq0 + weight * sq1;
    return square - mean * mean;
}

PPSPointerState pps_pointer_state(const PPSContext& ctx, const Projector& a,
                                  const PointerState& phi, double gamma) {
    const Complex aw = recompute_weak_value(ctx, a);
    const PointerState phi_shifted = translate(phi, gamma);
    const double n2 = pps_norm_squared(aw, phi, phi_shifted);
    if (n2 <= kSuccessFloor)
        throw PostSelectionFailure("post-selected pointer norm underflows (N^2 = " +
                                   std::to_string(n2) + ")");
    const double n = std::sqrt(n2);
    const Complex phase = std::exp(Complex(0.0, ctx.chi));
    Vector amp = ((1.0 - aw) * phi.amplitudes() + aw * phi_shifted.amplitudes()) *
                 (phase / n);
    return PPSPointerState{PointerState(phi.grid(), std::move(amp)), ctx.chi, n};
}

Eigen::VectorXd pps_profile(const PPSContext& ctx, const Projector& a,
                            const PointerState& phi, double gamma) {
    const Complex aw = recompute_weak_value(ctx, a);
    const PointerState phi_shifted = translate(phi, gamma);
    const double n2 = pps_norm_squared(aw, phi, phi_shifted);
    if (n2 <= kSuccessFloor)
        throw PostSelectionFailure("post-selected pointer norm underflows");
    const Complex cross_factor = aw * (1.0 - std::conj(aw));

    Eigen::VectorXd profile(phi.grid().n());
    for (int j = 0; j < phi.grid().n(); ++j) {
        const Complex cross =
            cross_factor * std::conj(phi.amplitudes()[j]) * phi_shifted.amplitudes()[j];
        profile[j] = (std::norm(1.0 - aw) * std::norm(phi.amplitudes()[j]) +
                      std::norm(aw) * std::norm(phi_shifted.amplitudes()[j]) +
                      2.0 * cross.real()) /
                     n2;
    }
    return profile;
}

double pps_mean(const PointerObservable& m, const PPSContext& ctx,
                const Projector& a, const PointerState& phi, double gamma) {
    const Complex aw = recompute_weak_value(ctx, a);
    const PointerState phi_shifted = translate(phi, gamma);
    const double n2 = pps_norm_squared(aw, phi, phi_shifted);
    if (n2 <= kSuccessFloor)
        throw PostSelectionFailure("post-selected pointer norm underflows");
    const PointerGrid& grid = phi.grid();

    // <phi|M S|phi> = <M phi|S phi> since M is Hermitian on the grid
    const Vector m_phi = m.apply(grid, phi.amplitudes());
    const Complex m_s = grid_inner(grid, m_phi, phi_shifted.amplitudes());
    const Complex cross = aw * (1.0 - std::conj(aw)) * m_s;
    return (std::norm(1.0 - aw) * observable_mean(phi, m) +
            std::norm(aw) * observable_mean(phi_shifted, m) + 2.0 * cross.real()) /
           n2;
}

double pps_variance(const PointerObservable& m, const PPSContext& ctx,
                    const Projector& a, const PointerState& phi, double gamma) {
    const PPSPointerState psi = pps_pointer_state(ctx, a, phi, gamma);
    const PointerGrid& grid = phi.grid();
    const Vector mv = m.apply(grid, psi.pointer.amplitudes());
    const double mean = grid_inner(grid, psi.pointer.amplitudes(), mv).real();
    const double square = grid_inner(grid, mv, mv).real();
    return square - mean * mean;
}

} // namespace qmeas
