#pragma once

#include <Eigen/Dense>
#include <complex>
#include <string>
#include <vector>

#include "qmeas/errors.hpp"
#include "qmeas/hilbert.hpp"

namespace qmeas {

/// Uniform position grid q_j = q_min + j*dq, j = 0..n-1, with the matching
/// FFT momentum grid p_k = hbar * (2*pi/L) * k_signed under periodic
/// boundary conditions. n must be a power of two, n >= 64.
class PointerGrid {
public:
    PointerGrid(int n_points, double q_min, double q_max, double hbar = 1.0);

    /// Default working grid: [-20*sigma, 20*sigma], 1024 points. Wide enough
    /// that a 5*sigma shift keeps the wavepacket contained.
    static PointerGrid standard(double sigma, double hbar = 1.0);

    int n() const { return n_; }
    double q_min() const { return q_min_; }
    double q_max() const { return q_max_; }
    double hbar() const { return hbar_; }
    double dq() const { return (q_max_ - q_min_) / n_; }
    double length() const { return q_max_ - q_min_; }
    double q(int j) const { return q_min_ + j * dq(); }
    /// Momentum of FFT bin k (signed frequency convention).
    double p(int k) const;

    const Eigen::VectorXd& q_values() const { return q_values_; }
    const Eigen::VectorXd& p_values() const { return p_values_; }

    bool operator==(const PointerGrid& other) const;

private:
    int n_;
    double q_min_, q_max_, hbar_;
    Eigen::VectorXd q_values_, p_values_;
};

/// Pointer wavefunction sampled on a grid. Must be normalized
/// (sum |phi_j|^2 dq = 1 within 1e-10) and contained: the outermost two grid
/// points on each side carry less than 1e-10 of the peak amplitude, which
/// guards the periodic-shift implementation against wraparound.
class PointerState {
public:
    PointerState(PointerGrid grid, Vector amplitudes);

    const PointerGrid& grid() const { return grid_; }
    const Vector& amplitudes() const { return amplitudes_; }
    double norm() const;

private:
    PointerGrid grid_;
    Vector amplitudes_;
};

/// Gaussian wavepacket: |phi(q)|^2 has mean `center` and variance sigma^2,
/// so var_p = hbar^2 / (4 sigma^2). Requires center +- 6 sigma inside the grid.
PointerState gaussian_pointer(const PointerGrid& grid, double center, double sigma);

/// Gaussian envelope with a momentum boost and a quadratic phase:
/// phi(q) ~ exp(-x^2/(4 sigma^2)) exp(i (boost q / hbar + curvature x^2)),
/// x = q - center. boost sets <p>, curvature sets cov(q,p) = 2 c sigma^2 hbar.
PointerState phased_gaussian(const PointerGrid& grid, double center, double sigma,
                             double boost = 0.0, double curvature = 0.0);

/// Applies the translation operator S = exp(-i*gamma*p/hbar):
/// out(q) = phi(q - gamma), realized by momentum-space phase multiplication.
/// Exact for grid-band-limited states; unitary.
PointerState translate(const PointerState& phi, double gamma);

namespace fourier {
/// Unnormalized forward DFT (position -> momentum representation).
Vector to_momentum(const Vector& position_amplitudes);
/// Inverse DFT including the 1/N factor (momentum -> position).
Vector to_position(const Vector& momentum_amplitudes);
} // namespace fourier

/// Discrete inner product <a|b> = sum conj(a_j) b_j dq.
Complex grid_inner(const PointerGrid& grid, const Vector& a, const Vector& b);

/// One term of a pointer-observable polynomial: coeff * sym(q^a p^b), where
/// sym(X,Y) = (XY + YX)/2 makes each term Hermitian.
struct ObservableTerm {
    double coeff;
    int q_power;
    int p_power;
};

/// Hermitian pointer observable: position, momentum, or a symmetrized
/// polynomial in (q, p).
class PointerObservable {
public:
    enum class Kind { Position, Momentum, Polynomial };

    static PointerObservable position();
    static PointerObservable momentum();
    static PointerObservable position_power(int power); // q^power
    static PointerObservable momentum_power(int power); // p^power
    static PointerObservable polynomial(std::vector<ObservableTerm> terms,
                                        std::string name = "poly");

    Kind kind() const { return kind_; }
    const std::vector<ObservableTerm>& terms() const { return terms_; }
    bool is_momentum() const { return kind_ == Kind::Momentum; }
    std::string name() const;

    /// M|v> on the grid (q diagonal in position space, p in Fourier space).
    Vector apply(const PointerGrid& grid, const Vector& v) const;

private:
    PointerObservable(Kind kind, std::vector<ObservableTerm> terms, std::string name);

    Kind kind_;
    std::vector<ObservableTerm> terms_;
    std::string name_;
};

/// <phi|M|phi>.
double observable_mean(const PointerState& phi, const PointerObservable& m);

/// Pointer moments and (complex) covariances with respect to one state.
/// ccv(M,p) = <Mp> - <M><p>;  cov(M,p) = <{M,p}>/2 - <M><p>;
/// the two satisfy 2 cov = ccv(M,p) + ccv(p,M).
struct MomentReport {
    double mean_q = 0.0;
    double mean_p = 0.0;
    double var_q = 0.0;
    double var_p = 0.0;
    double cov_qp = 0.0;
    Complex ccv_mp{0.0, 0.0}; // ccv(M, p) for the requested M
    double anticomm_mean = 0.0; // <{M, p}>
};

MomentReport moments(const PointerState& phi, const PointerObservable& m);

} // namespace qmeas
