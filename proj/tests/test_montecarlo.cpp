#include <doctest.h>

#include "qmeas/exact.hpp"
#include "qmeas/montecarlo.hpp"
#include "qmeas/random.hpp"

#include <cmath>

using namespace qmeas;

namespace {

SystemState make_state(std::initializer_list<Complex> values) {
    Vector v(static_cast<int>(values.size()));
    int i = 0;
    for (Complex c : values) v[i++] = c;
    return SystemState(std::move(v));
}

} // namespace

TEST_CASE("profile sampler reproduces the gaussian moments") {
    const PointerGrid grid = PointerGrid::standard(1.0);
    const PointerState phi = gaussian_pointer(grid, 0.5, 1.0);
    Eigen::VectorXd profile(grid.n());
    for (int j = 0; j < grid.n(); ++j) profile[j] = std::norm(phi.amplitudes()[j]);

    const ProfileSampler sampler(grid, profile);
    Rng rng(61);
    const int n = 20000;
    double sum = 0.0, sum2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = sampler.sample(rng);
        sum += x;
        sum2 += x * x;
    }
    const double mean = sum / n;
    const double var = sum2 / n - mean * mean;
    CHECK(mean == doctest::Approx(0.5).epsilon(0.03));
    CHECK(var == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("monte-carlo sensitivities agree within 10 percent") {
    const PointerGrid grid = PointerGrid::standard(1.0);
    const PointerState phi = gaussian_pointer(grid, 0.0, 1.0);
    const Projector p0 = make_projector({SystemState::basis_vector(2, 0)});
    const SystemState plus = make_state({1.0, 1.0});
    Rng rng(62);

    const McCheck mean_a = mc_check_mean_a(plus, p0, phi, 0.1, 10000, rng);
    CHECK(mean_a.predicted == doctest::Approx(10.0).epsilon(1e-9));
    CHECK(mean_a.rel_diff < 0.1);

    const McCheck gamma = mc_check_gamma(plus, p0, phi, 0.1, 10000, rng);
    CHECK(gamma.predicted == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(gamma.rel_diff < 0.1);

    const PPSContext ctx =
        pps_context(plus, make_state({1.0, Complex(0.0, 1.0)}), p0);
    const McCheck re_aw = mc_check_re_aw(ctx, p0, phi, 0.05, 10000, rng);
    CHECK(re_aw.predicted == doctest::Approx(20.0).epsilon(1e-9));
    CHECK(re_aw.rel_diff < 0.1);
}

TEST_CASE("monte-carlo draws are deterministic under a fixed seed") {
    const PointerGrid grid = PointerGrid::standard(1.0);
    const PointerState phi = gaussian_pointer(grid, 0.0, 1.0);
    const Projector p0 = make_projector({SystemState::basis_vector(2, 0)});
    const SystemState plus = make_state({1.0, 1.0});

    Rng rng1(63), rng2(63);
    const McCheck a = mc_check_mean_a(plus, p0, phi, 0.1, 2000, rng1);
    const McCheck b = mc_check_mean_a(plus, p0, phi, 0.1, 2000, rng2);
    CHECK(a.empirical == b.empirical); // bitwise identical
}
