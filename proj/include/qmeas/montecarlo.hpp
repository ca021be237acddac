#pragma once

#include <string>

#include "qmeas/exact.hpp"
#include "qmeas/random.hpp"
#include "qmeas/weak.hpp"

namespace qmeas {

/// Inverse-CDF sampler over a grid probability profile; within a cell the
/// position is drawn uniformly.
class ProfileSampler {
public:
    ProfileSampler(const PointerGrid& grid, const Eigen::VectorXd& profile);

    double sample(Rng& rng) const;

private:
    double q_min_, dq_;
    std::vector<double> cumulative; // cumulative mass up to and including cell j
};

/// One predicted-vs-empirical sensitivity comparison. `empirical` is the
/// standard deviation of the single-reading estimates (equivalently, the
/// mean-estimator standard error times sqrt(n)).
struct McCheck {
    std::string quantity;
    double predicted = 0.0;
    double empirical = 0.0;
    int n_draws = 0;
    double rel_diff = 0.0; // |empirical - predicted| / predicted
};

/// Draws n pointer readings from the exact PS profile and inverts
/// <q> = <q>_phi + gamma <A> per reading.
McCheck mc_check_mean_a(const SystemState& psi, const Projector& a,
                        const PointerState& phi, double gamma, int n, Rng& rng);

/// Same draws, inverting for gamma with <A> known.
McCheck mc_check_gamma(const SystemState& psi, const Projector& a,
                       const PointerState& phi, double gamma, int n, Rng& rng);

/// Draws from the exact PPS profile and inverts the first-order position
/// shift <q> = <q>_phi + gamma Re A_w + 2 (gamma/hbar) Im A_w cov(q,p).
McCheck mc_check_re_aw(const PPSContext& ctx, const Projector& a,
                       const PointerState& phi, double gamma, int n, Rng& rng);

} // namespace qmeas
