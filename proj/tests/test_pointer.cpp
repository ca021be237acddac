#include <doctest.h>

#include "qmeas/instances.hpp"
#include "qmeas/pointer.hpp"
#include "qmeas/random.hpp"

#include <cmath>

using namespace qmeas;

namespace {

/// Test-only momentum application by 4th-order central finite differences;
/// independent of the Fourier path used by the library.
Vector momentum_fd(const PointerGrid& grid, const Vector& v) {
    const int n = grid.n();
    const double dq = grid.dq();
    Vector out(n);
    auto at = [&](int j) { return v[(j % n + n) % n]; };
    for (int j = 0; j < n; ++j) {
        const Complex d1 =
            (at(j - 2) - 8.0 * at(j - 1) + 8.0 * at(j + 1) - at(j + 2)) / (12.0 * dq);
        out[j] = Complex(0.0, -grid.hbar()) * d1;
    }
    return out;
}

} // namespace

TEST_CASE("grid construction constraints") {
    CHECK_THROWS_AS(PointerGrid(100, -10.0, 10.0), Error); // not a power of two
    CHECK_THROWS_AS(PointerGrid(32, -10.0, 10.0), Error);  // too small
    CHECK_THROWS_AS(PointerGrid(128, 5.0, 5.0), Error);    // empty range
    const PointerGrid grid(128, -8.0, 8.0, 2.0);
    CHECK(grid.dq() == doctest::Approx(16.0 / 128));
    CHECK(grid.p(0) == doctest::Approx(0.0));
    CHECK(grid.p(1) == doctest::Approx(2.0 * 3.14159265358979323846 * 2.0 / 16.0));
    CHECK(grid.p(127) == doctest::Approx(-grid.p(1)));
}

TEST_CASE("gaussian pointer moments") {
    const PointerGrid grid = PointerGrid::standard(1.0);
    const PointerState phi = gaussian_pointer(grid, 0.0, 1.0);
    const MomentReport rep = moments(phi, PointerObservable::position());
    CHECK(std::abs(rep.mean_q) < 1e-9);
    CHECK(rep.var_q == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(rep.var_p == doctest::Approx(0.25).epsilon(1e-6)); // hbar^2 / (4 sigma^2)
    CHECK(std::abs(rep.mean_p) < 1e-12);
}

TEST_CASE("gaussian pointer translation of the center") {
    const PointerGrid grid = PointerGrid::standard(1.0);
    const PointerState phi = gaussian_pointer(grid, 3.0, 0.5);
    CHECK(moments(phi, PointerObservable::position()).mean_q ==
          doctest::Approx(3.0).epsilon(1e-9));
}

TEST_CASE("gaussian pointer rejects a packet that does not fit") {
    const PointerGrid grid = PointerGrid::standard(1.0); // [-20, 20]
    CHECK_THROWS_AS(gaussian_pointer(grid, 0.0, 4.0), GridContainment);
    CHECK_THROWS_AS(gaussian_pointer(grid, 18.0, 1.0), GridContainment);
}

TEST_CASE("translate by zero is the identity") {
    const PointerGrid grid = PointerGrid::standard(1.0);
    const PointerState phi = gaussian_pointer(grid, 0.0, 1.0);
    const PointerState out = translate(phi, 0.0);
    CHECK((out.amplitudes() - phi.amplitudes()).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("translate moves a gaussian rigidly") {
    const PointerGrid grid = PointerGrid::standard(1.0);
    const PointerState phi = gaussian_pointer(grid, 0.0, 1.0);
    const PointerState shifted = translate(phi, 1.5);
    const PointerState reference = gaussian_pointer(grid, 1.5, 1.0);
    CHECK((shifted.amplitudes() - reference.amplitudes()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("fractional grid shifts reproduce analytic samples") {
    const PointerGrid grid = PointerGrid::standard(1.0);
    const PointerState phi = gaussian_pointer(grid, 0.0, 1.0);
    const double gamma = 0.3 * grid.dq();
    const PointerState shifted = translate(phi, gamma);
    const double norm_const = std::pow(2.0 * 3.14159265358979323846, -0.25);
    for (int j = 200; j < 824; ++j) {
        const double x = grid.q(j) - gamma;
        const double expected = norm_const * std::exp(-x * x / 4.0);
        CHECK(std::abs(shifted.amplitudes()[j] - Complex(expected)) < 1e-9);
    }
}

TEST_CASE("translation group property, unitarity, momentum preservation") {
    Rng rng(21);
    const PointerGrid grid = PointerGrid::standard(1.0);
    const auto p = PointerObservable::momentum();
    for (int i = 0; i < 10; ++i) {
        const PointerState packet = random_wavepacket(rng, grid);
        const double a = rng.uniform(-2.0, 2.0);
        const double b = rng.uniform(-2.0, 2.0);
        const PointerState lhs = translate(translate(packet, a), b);
        const PointerState rhs = translate(packet, a + b);
        CHECK((lhs.amplitudes() - rhs.amplitudes()).cwiseAbs().maxCoeff() < 1e-10);
        CHECK(std::abs(translate(packet, a).norm() - packet.norm()) < 1e-12);
        CHECK(std::abs(observable_mean(translate(packet, a), p) -
                       observable_mean(packet, p)) < 1e-12);
    }
}

TEST_CASE("translate rejects shifts that break containment") {
    const PointerGrid grid = PointerGrid::standard(1.0);
    const PointerState phi = gaussian_pointer(grid, 0.0, 1.0);
    CHECK_THROWS_AS(translate(phi, 18.0), GridContainment);
    CHECK_THROWS_AS(translate(phi, 25.0), GridContainment); // beyond half period
}

TEST_CASE("observable means on a stationary gaussian") {
    const PointerGrid grid = PointerGrid::standard(1.0);
    const PointerState phi = gaussian_pointer(grid, 0.0, 1.0);
    CHECK(std::abs(observable_mean(phi, PointerObservable::position())) < 1e-12);
    CHECK(std::abs(observable_mean(phi, PointerObservable::momentum())) < 1e-12);
    CHECK(observable_mean(phi, PointerObservable::position_power(2)) ==
          doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("ccv(p,p) is the momentum variance") {
    const PointerGrid grid = PointerGrid::standard(1.0);
    const PointerState phi = gaussian_pointer(grid, 0.0, 1.0);
    const MomentReport rep = moments(phi, PointerObservable::momentum());
    CHECK(std::abs(rep.ccv_mp - Complex(rep.var_p, 0.0)) < 1e-12);
}

TEST_CASE("ccv(q,p) of a stationary gaussian is i hbar/2") {
    const PointerGrid grid = PointerGrid::standard(1.0);
    const PointerState phi = gaussian_pointer(grid, 0.0, 1.0);
    const MomentReport rep = moments(phi, PointerObservable::position());
    CHECK(std::abs(rep.ccv_mp - Complex(0.0, 0.5)) < 1e-12);
    CHECK(std::abs(rep.cov_qp) < 1e-12);
}

TEST_CASE("quadratic phase produces cov(q,p) = 2 c sigma^2 hbar") {
    const PointerGrid grid = PointerGrid::standard(1.0);
    const double curvature = 0.3;
    const PointerState phi = phased_gaussian(grid, 0.0, 1.0, 0.0, curvature);
    const MomentReport rep = moments(phi, PointerObservable::position());
    CHECK(rep.cov_qp == doctest::Approx(2.0 * curvature).epsilon(1e-8));

    // independent route: finite-difference momentum application
    const Vector p_fd = momentum_fd(grid, phi.amplitudes());
    const Vector q_phi =
        (phi.amplitudes().array() * grid.q_values().array().cast<Complex>()).matrix();
    const double mean_p_fd = grid_inner(grid, phi.amplitudes(), p_fd).real();
    const double cov_fd = grid_inner(grid, q_phi, p_fd).real() -
                          rep.mean_q * mean_p_fd;
    CHECK(cov_fd == doctest::Approx(2.0 * curvature).epsilon(1e-4));
}

TEST_CASE("momentum boost sets the mean momentum") {
    const PointerGrid grid = PointerGrid::standard(1.0);
    const PointerState phi = phased_gaussian(grid, 0.0, 1.0, 0.7, 0.0);
    CHECK(observable_mean(phi, PointerObservable::momentum()) ==
          doctest::Approx(0.7).epsilon(1e-9));
}

TEST_CASE("covariance identities over random wavepackets") {
    Rng rng(22);
    const PointerGrid grid = PointerGrid::standard(1.0);
    const auto p = PointerObservable::momentum();
    const std::vector<PointerObservable> ms = {
        PointerObservable::position(),
        PointerObservable::position_power(2),
        PointerObservable::polynomial({{1.0, 1, 1}}),
    };
    for (int i = 0; i < 10; ++i) {
        const PointerState packet = random_wavepacket(rng, grid);
        const Vector p_packet = p.apply(grid, packet.amplitudes());
        const double mean_p = grid_inner(grid, packet.amplitudes(), p_packet).real();
        for (const auto& m : ms) {
            const MomentReport rep = moments(packet, m);
            const Vector m_packet = m.apply(grid, packet.amplitudes());
            const double mean_m = grid_inner(grid, packet.amplitudes(), m_packet).real();
            const Complex ccv_pm = grid_inner(grid, p_packet, m_packet) - mean_p * mean_m;
            const double cov = 0.5 * rep.anticomm_mean - mean_m * rep.mean_p;
            CHECK(std::abs(2.0 * cov - (rep.ccv_mp + ccv_pm)) < 1e-10);
            CHECK(std::abs((rep.ccv_mp + ccv_pm).imag()) < 1e-10);
        }
        const MomentReport rep_q = moments(packet, PointerObservable::position());
        CHECK(std::abs(rep_q.ccv_mp - Complex(rep_q.cov_qp, 0.5 * grid.hbar())) < 1e-10);
        CHECK(rep_q.var_q * rep_q.var_p >= 0.25 * grid.hbar() * grid.hbar() - 1e-9);
        CHECK(rep_q.var_q >= 0.0);
        CHECK(rep_q.var_p >= 0.0);
    }
}

TEST_CASE("pointer state constructor enforces normalization and containment") {
    const PointerGrid grid = PointerGrid::standard(1.0);
    Vector flat = Vector::Constant(grid.n(), Complex(1.0)); // touches the edges
    flat /= std::sqrt(flat.squaredNorm() * grid.dq());
    CHECK_THROWS_AS(PointerState(grid, flat), GridContainment);

    Vector unnormalized = gaussian_pointer(grid, 0.0, 1.0).amplitudes() * 2.0;
    CHECK_THROWS_AS(PointerState(grid, unnormalized), Error);
}
