#include "qmeas/pointer.hpp"

#include <unsupported/Eigen/FFT>
#include <cmath>

namespace qmeas {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kEdgeContainmentTol = 1e-10;
constexpr double kNormTol = 1e-10;

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

/// Long-double accumulation keeps quadrature sums good to ~1e-16 even for
/// 1e3-point grids with O(100) integrand values.
Complex accumulate_inner(const Vector& a, const Vector& b, double dq) {
    long double re = 0.0L, im = 0.0L;
    const int n = static_cast<int>(a.size());
    for (int j = 0; j < n; ++j) {
        const Complex t = std::conj(a[j]) * b[j];
        re += t.real();
        im += t.imag();
    }
    return {static_cast<double>(re * dq), static_cast<double>(im * dq)};
}

double accumulate_weighted(const Eigen::VectorXd& weight, const Vector& v, double scale) {
    long double s = 0.0L;
    const int n = static_cast<int>(v.size());
    for (int j = 0; j < n; ++j) s += weight[j] * std::norm(v[j]);
    return static_cast<double>(s * scale);
}

} // namespace

PointerGrid::PointerGrid(int n_points, double q_min, double q_max, double hbar)
    : n_(n_points), q_min_(q_min), q_max_(q_max), hbar_(hbar) {
    if (!is_power_of_two(n_) || n_ < 64)
        throw Error("grid size must be a power of two >= 64, got " + std::to_string(n_));
    if (!(q_max_ > q_min_)) throw Error("grid requires q_max > q_min");
    if (!(hbar_ > 0.0)) throw Error("grid requires hbar > 0");
    q_values_.resize(n_);
    p_values_.resize(n_);
    for (int j = 0; j < n_; ++j) q_values_[j] = q(j);
    const double dp = 2.0 * kPi * hbar_ / length();
    for (int k = 0; k < n_; ++k) {
        const int signed_k = (k < n_ / 2) ? k : k - n_;
        p_values_[k] = dp * signed_k;
    }
}

PointerGrid PointerGrid::standard(double sigma, double hbar) {
    return PointerGrid(1024, -20.0 * sigma, 20.0 * sigma, hbar);
}

double PointerGrid::p(int k) const { return p_values_[k]; }

bool PointerGrid::operator==(const PointerGrid& other) const {
    return n_ == other.n_ && q_min_ == other.q_min_ && q_max_ == other.q_max_ &&
           hbar_ == other.hbar_;
}

PointerState::PointerState(PointerGrid grid, Vector amplitudes)
    : grid_(std::move(grid)), amplitudes_(std::move(amplitudes)) {
    if (amplitudes_.size() != grid_.n())
        throw DimensionMismatch("pointer amplitudes size " +
                                std::to_string(amplitudes_.size()) +
                                " does not match grid size " + std::to_string(grid_.n()));
    const double n = norm();
    if (std::abs(n - 1.0) > kNormTol)
        throw Error("pointer state not normalized: |norm - 1| = " +
                    std::to_string(std::abs(n - 1.0)));
    const double peak = amplitudes_.cwiseAbs().maxCoeff();
    const int last = grid_.n() - 1;
    const double edge = std::max({std::abs(amplitudes_[0]), std::abs(amplitudes_[1]),
                                  std::abs(amplitudes_[last - 1]), std::abs(amplitudes_[last])});
    if (edge >= kEdgeContainmentTol * peak)
        throw GridContainment("wavepacket touches the grid edge (|phi|_edge/|phi|_peak = " +
                              std::to_string(edge / peak) + ")");
}

double PointerState::norm() const {
    long double s = 0.0L;
    for (int j = 0; j < grid_.n(); ++j) s += std::norm(amplitudes_[j]);
    return std::sqrt(static_cast<double>(s * static_cast<long double>(grid_.dq())));
}

PointerState gaussian_pointer(const PointerGrid& grid, double center, double sigma) {
    if (!(sigma > 0.0)) throw Error("gaussian pointer requires sigma > 0");
    if (center - 6.0 * sigma < grid.q_min() || center + 6.0 * sigma > grid.q_max())
        throw GridContainment("gaussian 6-sigma support leaves the grid");
    Vector phi(grid.n());
    for (int j = 0; j < grid.n(); ++j) {
        const double x = grid.q(j) - center;
        phi[j] = std::exp(-x * x / (4.0 * sigma * sigma));
    }
    long double s = 0.0L;
    for (int j = 0; j < grid.n(); ++j) s += std::norm(phi[j]);
    phi /= std::sqrt(static_cast<double>(s * static_cast<long double>(grid.dq())));
    return PointerState(grid, std::move(phi));
}

PointerState phased_gaussian(const PointerGrid& grid, double center, double sigma,
                             double boost, double curvature) {
    if (!(sigma > 0.0)) throw Error("phased gaussian requires sigma > 0");
    Vector phi(grid.n());
    for (int j = 0; j < grid.n(); ++j) {
        const double x = grid.q(j) - center;
        const double phase = boost * grid.q(j) / grid.hbar() + curvature * x * x;
        phi[j] = std::exp(-x * x / (4.0 * sigma * sigma)) *
                 std::exp(Complex(0.0, phase));
    }
    long double s = 0.0L;
    for (int j = 0; j < grid.n(); ++j) s += std::norm(phi[j]);
    phi /= std::sqrt(static_cast<double>(s * static_cast<long double>(grid.dq())));
    return PointerState(grid, std::move(phi));
}

namespace fourier {

Vector to_momentum(const Vector& position_amplitudes) {
    Eigen::FFT<double> fft;
    Vector out(position_amplitudes.size());
    fft.fwd(out, position_amplitudes);
    return out;
}

Vector to_position(const Vector& momentum_amplitudes) {
    Eigen::FFT<double> fft;
    Vector out(momentum_amplitudes.size());
    fft.inv(out, momentum_amplitudes);
    return out;
}

} // namespace fourier

PointerState translate(const PointerState& phi, double gamma) {
    const PointerGrid& grid = phi.grid();
    if (std::abs(gamma) >= 0.5 * grid.length())
        throw GridContainment("translation by " + std::to_string(gamma) +
                              " exceeds half the grid period");
    Vector hat = fourier::to_momentum(phi.amplitudes());
    for (int k = 0; k < grid.n(); ++k)
        hat[k] *= std::exp(Complex(0.0, -gamma * grid.p(k) / grid.hbar()));
    // The PointerState constructor re-checks containment of the shifted packet.
    return PointerState(grid, fourier::to_position(hat));
}

Complex grid_inner(const PointerGrid& grid, const Vector& a, const Vector& b) {
    if (a.size() != grid.n() || b.size() != grid.n())
        throw DimensionMismatch("grid_inner: vector size does not match grid");
    return accumulate_inner(a, b, grid.dq());
}

PointerObservable::PointerObservable(Kind kind, std::vector<ObservableTerm> terms,
                                     std::string name)
    : kind_(kind), terms_(std::move(terms)), name_(std::move(name)) {
    for (const auto& t : terms_)
        if (t.q_power < 0 || t.p_power < 0)
            throw Error("observable powers must be non-negative");
}

PointerObservable PointerObservable::position() {
    return PointerObservable(Kind::Position, {{1.0, 1, 0}}, "q");
}

PointerObservable PointerObservable::momentum() {
    return PointerObservable(Kind::Momentum, {{1.0, 0, 1}}, "p");
}

PointerObservable PointerObservable::position_power(int power) {
    if (power == 1) return position();
    return PointerObservable(Kind::Polynomial, {{1.0, power, 0}},
                             "q" + std::to_string(power));
}

PointerObservable PointerObservable::momentum_power(int power) {
    if (power == 1) return momentum();
    return PointerObservable(Kind::Polynomial, {{1.0, 0, power}},
                             "p" + std::to_string(power));
}

PointerObservable PointerObservable::polynomial(std::vector<ObservableTerm> terms,
                                                std::string name) {
    return PointerObservable(Kind::Polynomial, std::move(terms), std::move(name));
}

std::string PointerObservable::name() const { return name_; }

Vector PointerObservable::apply(const PointerGrid& grid, const Vector& v) const {
    if (v.size() != grid.n())
        throw DimensionMismatch("observable applied to vector of wrong size");

    Vector result = Vector::Zero(grid.n());
    Vector v_hat; // lazily computed momentum representation of v

    auto apply_q_power = [&grid](const Vector& in, int a) {
        Vector out = in;
        for (int j = 0; j < grid.n(); ++j)
            out[j] *= std::pow(grid.q_values()[j], a);
        return out;
    };
    auto apply_p_power_hat = [&grid](const Vector& in_hat, int b) {
        Vector out = in_hat;
        for (int k = 0; k < grid.n(); ++k)
            out[k] *= std::pow(grid.p_values()[k], b);
        return out;
    };

    for (const auto& term : terms_) {
        if (term.p_power == 0) {
            result += term.coeff * apply_q_power(v, term.q_power);
            continue;
        }
        if (v_hat.size() == 0) v_hat = fourier::to_momentum(v);
        const Vector pv = fourier::to_position(apply_p_power_hat(v_hat, term.p_power));
        if (term.q_power == 0) {
            result += term.coeff * pv;
            continue;
        }
        // symmetrized mixed term: coeff/2 * (Q^a P^b + P^b Q^a)
        result += (0.5 * term.coeff) * apply_q_power(pv, term.q_power);
        const Vector qv_hat = fourier::to_momentum(apply_q_power(v, term.q_power));
        result += (0.5 * term.coeff) *
                  fourier::to_position(apply_p_power_hat(qv_hat, term.p_power));
    }
    return result;
}

double observable_mean(const PointerState& phi, const PointerObservable& m) {
    const PointerGrid& grid = phi.grid();
    if (m.kind() == PointerObservable::Kind::Position)
        return accumulate_weighted(grid.q_values(), phi.amplitudes(), grid.dq());
    if (m.kind() == PointerObservable::Kind::Momentum) {
        const Vector hat = fourier::to_momentum(phi.amplitudes());
        return accumulate_weighted(grid.p_values(), hat, grid.dq() / grid.n());
    }
    return grid_inner(grid, phi.amplitudes(), m.apply(grid, phi.amplitudes())).real();
}

MomentReport moments(const PointerState& phi, const PointerObservable& m) {
    const PointerGrid& grid = phi.grid();
    const Vector& amp = phi.amplitudes();
    const double dq = grid.dq();

    MomentReport r;
    r.mean_q = accumulate_weighted(grid.q_values(), amp, dq);
    {
        Eigen::VectorXd centered = grid.q_values().array() - r.mean_q;
        centered = centered.array().square();
        r.var_q = accumulate_weighted(centered, amp, dq);
    }
    const Vector hat = fourier::to_momentum(amp);
    const double w = dq / grid.n();
    r.mean_p = accumulate_weighted(grid.p_values(), hat, w);
    {
        Eigen::VectorXd centered = grid.p_values().array() - r.mean_p;
        centered = centered.array().square();
        r.var_p = accumulate_weighted(centered, hat, w);
    }

    const Vector p_amp = fourier::to_position(
        (hat.array() * grid.p_values().array().cast<Complex>()).matrix());
    const Vector q_amp = (amp.array() * grid.q_values().array().cast<Complex>()).matrix();
    r.cov_qp = grid_inner(grid, q_amp, p_amp).real() - r.mean_q * r.mean_p;

    const Vector m_amp = m.apply(grid, amp);
    const double mean_m = grid_inner(grid, amp, m_amp).real();
    const Complex mp = grid_inner(grid, m_amp, p_amp);
    r.ccv_mp = mp - mean_m * r.mean_p;
    r.anticomm_mean = 2.0 * mp.real();
    return r;
}

} // namespace qmeas
