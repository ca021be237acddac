#include "qmeas/montecarlo.hpp"

#include <algorithm>
#include <cmath>

namespace qmeas {

namespace {

/// Unbiased sample standard deviation.
double sample_std(const std::vector<double>& values) {
    const std::size_t n = values.size();
    long double mean = 0.0L;
    for (double v : values) mean += v;
    mean /= static_cast<long double>(n);
    long double ss = 0.0L;
    for (double v : values) {
        const long double d = v - mean;
        ss += d * d;
    }
    return std::sqrt(static_cast<double>(ss / static_cast<long double>(n - 1)));
}

McCheck make_check(std::string quantity, double predicted,
                   const std::vector<double>& estimates) {
    McCheck c;
    c.quantity = std::move(quantity);
    c.predicted = predicted;
    c.empirical = sample_std(estimates);
    c.n_draws = static_cast<int>(estimates.size());
    c.rel_diff = std::abs(c.empirical - c.predicted) / c.predicted;
    return c;
}

} // namespace

ProfileSampler::ProfileSampler(const PointerGrid& grid, const Eigen::VectorXd& profile)
    : q_min_(grid.q_min()), dq_(grid.dq()) {
    if (profile.size() != grid.n())
        throw DimensionMismatch("profile size does not match grid");
    cumulative.resize(profile.size());
    long double acc = 0.0L;
    for (int j = 0; j < profile.size(); ++j) {
        acc += std::max(profile[j], 0.0) * dq_; // clamp roundoff negatives
        cumulative[j] = static_cast<double>(acc);
    }
    const double total = cumulative.back();
    if (total <= 0.0) throw Error("profile has no probability mass");
    for (double& c : cumulative) c /= total;
}

double ProfileSampler::sample(Rng& rng) const {
    const double u = rng.uniform();
    const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    const std::size_t j =
        std::min<std::size_t>(it - cumulative.begin(), cumulative.size() - 1);
    const double below = (j == 0) ? 0.0 : cumulative[j - 1];
    const double mass = cumulative[j] - below;
    const double frac = (mass > 0.0) ? (u - below) / mass : 0.5;
    // cell j is centered on q_j = q_min + j*dq
    return q_min_ + j * dq_ + dq_ * (frac - 0.5);
}

McCheck mc_check_mean_a(const SystemState& psi, const Projector& a,
                        const PointerState& phi, double gamma, int n, Rng& rng) {
    const double predicted =
        sensitivity_ps(PointerObservable::position(), psi, a, phi, gamma).delta_mean_a;
    const double mean_q0 = moments(phi, PointerObservable::position()).mean_q;
    const ProfileSampler sampler(phi.grid(), ps_profile(psi, phi, a, gamma));
    std::vector<double> estimates(n);
    for (int i = 0; i < n; ++i) estimates[i] = (sampler.sample(rng) - mean_q0) / gamma;
    return make_check("delta_mean_a", predicted, estimates);
}

McCheck mc_check_gamma(const SystemState& psi, const Projector& a,
                       const PointerState& phi, double gamma, int n, Rng& rng) {
    const double predicted = sensitivity_gamma(psi, a, phi);
    const double mean_a = expectation(psi, a);
    const double mean_q0 = moments(phi, PointerObservable::position()).mean_q;
    const ProfileSampler sampler(phi.grid(), ps_profile(psi, phi, a, gamma));
    std::vector<double> estimates(n);
    for (int i = 0; i < n; ++i) estimates[i] = (sampler.sample(rng) - mean_q0) / mean_a;
    return make_check("delta_gamma", predicted, estimates);
}

McCheck mc_check_re_aw(const PPSContext& ctx, const Projector& a,
                       const PointerState& phi, double gamma, int n, Rng& rng) {
    const double predicted =
        sensitivity_re_weak_value(PointerObservable::position(), ctx, a, phi, gamma)
            .delta_re_aw;
    const Complex aw = weak_value(ctx.psi_i, ctx.psi_f, a).value;
    const MomentReport base = moments(phi, PointerObservable::position());
    const double offset = base.mean_q +
                          2.0 * (gamma / phi.grid().hbar()) * aw.imag() * base.cov_qp;
    const ProfileSampler sampler(phi.grid(), pps_profile(ctx, a, phi, gamma));
    std::vector<double> estimates(n);
    for (int i = 0; i < n; ++i) estimates[i] = (sampler.sample(rng) - offset) / gamma;
    return make_check("delta_re_aw", predicted, estimates);
}

} // namespace qmeas
