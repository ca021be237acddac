#include "qmeas/weak.hpp"

#include "qmeas/oracle.hpp"

#include <cmath>

namespace qmeas {

namespace {

constexpr double kErrorFloor = 1e-13;   // below this, |exact-weak| is roundoff
constexpr double kRatioBandLo = 3.5;
constexpr double kRatioBandHi = 4.5;

/// <phi|[M,p]|phi>, constructed exactly imaginary.
Complex commutator_mean(const PointerGrid& grid, const Vector& m_phi,
                        const Vector& p_phi) {
    return Complex(0.0, 2.0 * grid_inner(grid, m_phi, p_phi).imag());
}

Vector momentum_apply(const PointerGrid& grid, const Vector& v) {
    return PointerObservable::momentum().apply(grid, v);
}

struct CommutatorData {
    Complex comm;      // <[M,p]>
    double mean_m;     // <M>
    double var_m;      // Delta^2_phi M
    double mean_p;
};

CommutatorData commutator_data(const PointerState& phi, const PointerObservable& m) {
    const PointerGrid& grid = phi.grid();
    const Vector m_phi = m.apply(grid, phi.amplitudes());
    const Vector p_phi = momentum_apply(grid, phi.amplitudes());
    CommutatorData d;
    d.comm = commutator_mean(grid, m_phi, p_phi);
    d.mean_m = grid_inner(grid, phi.amplitudes(), m_phi).real();
    d.var_m = grid_inner(grid, m_phi, m_phi).real() - d.mean_m * d.mean_m;
    d.mean_p = grid_inner(grid, phi.amplitudes(), p_phi).real();
    return d;
}

void require_invertible(const PointerObservable& m, const Complex& comm) {
    if (m.is_momentum())
        throw UndefinedSensitivity("M = p is excluded ([p,p] = 0)");
    if (std::abs(comm) < 1e-14)
        throw UndefinedSensitivity("<[M,p]> vanishes for this pointer state");
}

double sigma_q_of(const PointerState& phi) {
    return std::sqrt(moments(phi, PointerObservable::position()).var_q);
}

} // namespace

Complex pair_moment_functional(const PointerState& phi, const PointerObservable& m,
                               bool anticommutator) {
    const PointerGrid& grid = phi.grid();
    const Vector m_phi = m.apply(grid, phi.amplitudes());
    const Vector m2_phi = m.apply(grid, m_phi);
    const Vector p_phi = momentum_apply(grid, phi.amplitudes());

    const double mean_m = grid_inner(grid, phi.amplitudes(), m_phi).real();
    const Complex m2p = grid_inner(grid, m2_phi, p_phi);
    const Complex mp = grid_inner(grid, m_phi, p_phi);
    if (anticommutator)
        return Complex(2.0 * m2p.real(), 0.0) - 2.0 * mean_m * Complex(2.0 * mp.real(), 0.0);
    return Complex(0.0, 2.0 * m2p.imag()) - 2.0 * mean_m * Complex(0.0, 2.0 * mp.imag());
}

bool weak_regime_ok(double gamma, Complex a_w, double sigma_q) {
    return gamma * std::max(1.0, std::abs(a_w)) <= 0.1 * sigma_q;
}

double weak_ps_mean(const PointerObservable& m, const SystemState& psi,
                    const SystemOperator& a, const PointerState& phi, double gamma) {
    const double mean_a = expectation(psi, a);
    const CommutatorData d = commutator_data(phi, m);
    const double hbar = phi.grid().hbar();
    const Complex value = d.mean_m - Complex(0.0, gamma * mean_a / hbar) * d.comm;
    return value.real();
}

double weak_pps_mean(const PointerObservable& m, const PPSContext& ctx,
                     const SystemOperator& a, const PointerState& phi, double gamma) {
    const Complex aw = weak_value(ctx.psi_i, ctx.psi_f, a).value;
    const CommutatorData d = commutator_data(phi, m);
    const double hbar = phi.grid().hbar();

    const Vector m_phi = m.apply(phi.grid(), phi.amplitudes());
    const Vector p_phi = momentum_apply(phi.grid(), phi.amplitudes());
    const Complex ccv = grid_inner(phi.grid(), m_phi, p_phi) - d.mean_m * d.mean_p;

    const Complex value = d.mean_m -
                          Complex(0.0, gamma / hbar) * std::conj(aw) * d.comm +
                          2.0 * (gamma / hbar) * aw.imag() * ccv;
    return value.real(); // imaginary parts cancel analytically
}

SensitivityReport sensitivity_ps(const PointerObservable& m, const SystemState& psi,
                                 const SystemOperator& a, const PointerState& phi,
                                 double gamma) {
    const CommutatorData d = commutator_data(phi, m);
    require_invertible(m, d.comm);

    const double mean_a = expectation(psi, a);
    const double hbar = phi.grid().hbar();
    const Complex b = pair_moment_functional(phi, m, false);
    const Complex c = pair_moment_functional(phi, m, true);

    const Complex corrected = d.var_m - Complex(0.0, gamma / hbar) * b * mean_a;
    if (corrected.real() < 0.0)
        throw InvalidRegime("first-order-corrected variance is negative (" +
                            std::to_string(corrected.real()) + ")");
    const double denom = std::pow(gamma / hbar, 2) * std::norm(d.comm);

    SensitivityReport r;
    r.delta_mean_a = std::sqrt(corrected.real() / denom);
    r.b_mp = b;
    r.c_mp = c.real();
    r.variance_final = corrected.real();
    r.weakness_warning = !weak_regime_ok(gamma, Complex(mean_a, 0.0), sigma_q_of(phi));
    return r;
}

double sensitivity_gamma(const SystemState& psi, const SystemOperator& a,
                         const PointerState& phi) {
    const double mean_a = expectation(psi, a);
    if (std::abs(mean_a) < 1e-12)
        throw UndefinedSensitivity("<A> = 0; gamma cannot be inferred from <q>");
    const double delta_q = sigma_q_of(phi);
    return delta_q / std::abs(mean_a);
}

SensitivityReport sensitivity_re_weak_value(const PointerObservable& m,
                                            const PPSContext& ctx,
                                            const SystemOperator& a,
                                            const PointerState& phi, double gamma) {
    const CommutatorData d = commutator_data(phi, m);
    require_invertible(m, d.comm);

    const Complex aw = weak_value(ctx.psi_i, ctx.psi_f, a).value;
    const double hbar = phi.grid().hbar();
    const Complex b = pair_moment_functional(phi, m, false);
    const Complex c = pair_moment_functional(phi, m, true);

    const Complex corrected =
        d.var_m - Complex(0.0, gamma / hbar) * b * aw.real() +
        (gamma / hbar) * (c.real() - 2.0 * d.mean_p * (d.var_m - d.mean_m * d.mean_m)) *
            aw.imag();
    if (corrected.real() < 0.0)
        throw InvalidRegime("first-order-corrected variance is negative (" +
                            std::to_string(corrected.real()) + ")");
    const double denom = std::pow(gamma / hbar, 2) * std::norm(d.comm);

    SensitivityReport r;
    r.delta_re_aw = std::sqrt(corrected.real() / denom);
    r.b_mp = b;
    r.c_mp = c.real();
    r.variance_final = corrected.real();
    r.weakness_warning = !weak_regime_ok(gamma, aw, sigma_q_of(phi));
    return r;
}

bool ConvergenceTable::ratios_ok() const {
    for (const auto& row : rows)
        if (row.error_ratio && !row.ratio_in_band) return false;
    return true;
}

ConvergenceTable convergence_probe(const ProbeInstance& instance,
                                   const std::vector<double>& gammas) {
    const bool pps = instance.psi_f.has_value();
    const bool projector = instance.op.is_projector();
    const double sigma_q = sigma_q_of(instance.phi0);

    std::optional<PPSContext> ctx;
    if (pps) ctx = pps_context(instance.psi_i, *instance.psi_f, instance.op);

    auto reference_mean = [&](double gamma) {
        if (projector) {
            const Projector proj(instance.op.matrix());
            if (pps) return pps_mean(instance.m, *ctx, proj, instance.phi0, gamma);
            return ps_mean(instance.m, instance.psi_i, instance.phi0, proj, gamma);
        }
        const JointState joint =
            evolve_joint(instance.psi_i, instance.phi0, instance.op, gamma);
        if (pps)
            return observable_mean(oracle_post_select(joint, *instance.psi_f).pointer,
                                   instance.m);
        return oracle_ps_mean(joint, instance.m);
    };
    auto approx_mean = [&](double gamma) {
        if (pps) return weak_pps_mean(instance.m, *ctx, instance.op, instance.phi0, gamma);
        return weak_ps_mean(instance.m, instance.psi_i, instance.op, instance.phi0, gamma);
    };

    ConvergenceTable table;
    table.rows.reserve(gammas.size());
    for (double gamma : gammas) {
        ConvergenceRow row;
        row.gamma = gamma;
        row.exact_mean = reference_mean(gamma);
        row.weak_mean = approx_mean(gamma);
        row.abs_error = std::abs(row.exact_mean - row.weak_mean);
        table.rows.push_back(row);
    }

    // error ratios across consecutive halvings inside the weak window
    for (std::size_t i = 0; i + 1 < table.rows.size(); ++i) {
        auto& row = table.rows[i];
        const auto& next = table.rows[i + 1];
        const bool halving = std::abs(next.gamma - 0.5 * row.gamma) <=
                             1e-12 * std::max(1.0, row.gamma);
        const bool weak_window = row.gamma <= 0.1 * sigma_q && row.gamma > 0.0;
        const bool above_floor =
            row.abs_error > kErrorFloor && next.abs_error > kErrorFloor;
        if (halving && weak_window && above_floor) {
            row.error_ratio = row.abs_error / next.abs_error;
            row.ratio_in_band =
                *row.error_ratio >= kRatioBandLo && *row.error_ratio <= kRatioBandHi;
        }
    }

    // least-squares slope of log(err) vs log(gamma) above the roundoff floor
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int count = 0;
    for (const auto& row : table.rows) {
        if (row.gamma <= 0.0 || row.abs_error <= kErrorFloor) continue;
        const double x = std::log(row.gamma);
        const double y = std::log(row.abs_error);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++count;
    }
    if (count >= 2 && (count * sxx - sx * sx) > 0.0)
        table.fitted_slope = (count * sxy - sx * sy) / (count * sxx - sx * sx);
    return table;
}

} // namespace qmeas
