#pragma once

#include <optional>
#include <vector>

#include "qmeas/exact.hpp"
#include "qmeas/hilbert.hpp"
#include "qmeas/pointer.hpp"

namespace qmeas {

/// First-order error-propagation sensitivities for a single pointer reading;
/// ensemble-of-n accuracy is delta / sqrt(n).
struct SensitivityReport {
    double delta_mean_a = 0.0;  // delta <psi|A|psi>
    double delta_gamma = 0.0;   // delta gamma
    double delta_re_aw = 0.0;   // delta Re A_w
    Complex b_mp{0.0, 0.0};     // B(M,p) = <[M^2,p]> - 2<M><[M,p]> (imaginary)
    double c_mp = 0.0;          // C(M,p) = <{M^2,p}> - 2<M><{M,p}> (real)
    double variance_final = 0.0; // first-order-corrected pointer variance of M
    bool weakness_warning = false; // heuristic: gamma*max(1,|A_w|) > 0.1*sigma_q
};

/// Shared evaluator behind B and C: <o(M^2,p)> - 2<M><o(M,p)> where o is the
/// commutator (anticommutator = false) or the anticommutator.
Complex pair_moment_functional(const PointerState& phi, const PointerObservable& m,
                               bool anticommutator);

/// Heuristic weak-regime check (no hard inequality is enforced anywhere).
bool weak_regime_ok(double gamma, Complex a_w, double sigma_q);

/// First-order pointer mean for a pre-selected measurement of any Hermitian A:
/// <M>_phi - (i/hbar) gamma <A> <phi|[M,p]|phi>. Exact for M in {q, p}.
double weak_ps_mean(const PointerObservable& m, const SystemState& psi,
                    const SystemOperator& a, const PointerState& phi, double gamma);

/// First-order pointer mean with post-selection:
/// <M>_phi - (i/hbar) gamma A_w* <[M,p]> + 2 (gamma/hbar) Im A_w ccv(M,p).
double weak_pps_mean(const PointerObservable& m, const PPSContext& ctx,
                     const SystemOperator& a, const PointerState& phi, double gamma);

/// Sensitivity of <psi|A|psi> determined from a mean-M pointer reading.
/// Requires M != p and <[M,p]> != 0. For M = q this reduces to Delta_q/gamma.
SensitivityReport sensitivity_ps(const PointerObservable& m, const SystemState& psi,
                                 const SystemOperator& a, const PointerState& phi,
                                 double gamma);

/// Sensitivity of gamma determined from the mean pointer position when <A> is
/// known and <q>_phi = 0: delta gamma = Delta_q / <A>.
double sensitivity_gamma(const SystemState& psi, const SystemOperator& a,
                         const PointerState& phi);

/// Sensitivity of Re A_w; the Im A_w part enters through C(M,p) and shifts the
/// accuracy up or down depending on its sign.
SensitivityReport sensitivity_re_weak_value(const PointerObservable& m,
                                            const PPSContext& ctx,
                                            const SystemOperator& a,
                                            const PointerState& phi, double gamma);

/// One configured comparison instance for the convergence probe. psi_f engaged
/// selects the post-selected path. Projector operators are referenced against
/// the closed forms; general Hermitian operators against the spectral oracle.
struct ProbeInstance {
    SystemState psi_i;
    std::optional<SystemState> psi_f;
    SystemOperator op;
    PointerState phi0;
    PointerObservable m;
};

struct ConvergenceRow {
    double gamma = 0.0;
    double exact_mean = 0.0;
    double weak_mean = 0.0;
    double abs_error = 0.0;
    /// err(gamma_i)/err(gamma_{i+1}) when gamma_{i+1} = gamma_i/2, gamma_i is
    /// in the weak window and both errors sit above the roundoff floor.
    std::optional<double> error_ratio;
    bool ratio_in_band = true; // ratio within [3.5, 4.5] when applicable
};

struct ConvergenceTable {
    std::vector<ConvergenceRow> rows;
    std::optional<double> fitted_slope; // log-log slope of error vs gamma
    bool ratios_ok() const;
};

/// |exact - weak| of the pointer mean per gamma. Truncation of the translation
/// operator at first order leaves an O(gamma^2) remainder, so halving gamma
/// should divide the error by ~4 in the weak window.
ConvergenceTable convergence_probe(const ProbeInstance& instance,
                                   const std::vector<double>& gammas);

} // namespace qmeas
