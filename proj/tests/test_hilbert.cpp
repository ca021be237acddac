#include <doctest.h>

#include "qmeas/hilbert.hpp"
#include "qmeas/instances.hpp"
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

constexpr double kPi = 3.14159265358979323846;

} // namespace

TEST_CASE("make_projector onto |0> in d=2") {
    const Projector p = make_projector({SystemState::basis_vector(2, 0)});
    CHECK(std::abs(p.matrix()(0, 0) - Complex(1.0)) < 1e-14);
    CHECK(std::abs(p.matrix()(0, 1)) < 1e-14);
    CHECK(std::abs(p.matrix()(1, 0)) < 1e-14);
    CHECK(std::abs(p.matrix()(1, 1)) < 1e-14);
}

TEST_CASE("make_projector full basis gives the identity") {
    const Projector p = make_projector(
        {SystemState::basis_vector(2, 0), SystemState::basis_vector(2, 1)});
    CHECK((p.matrix() - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("make_projector onto (1,1)/sqrt(2)") {
    // outer product by hand: every entry is 1/2
    const Projector p = make_projector({make_state({1.0, 1.0})});
    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c)
            CHECK(std::abs(p.matrix()(r, c) - Complex(0.5)) < 1e-14);
    CHECK(p.idempotency_residual() < 1e-12);
}

TEST_CASE("make_projector rejects linearly dependent input") {
    const SystemState v = make_state({1.0, 1.0});
    const SystemState w = make_state({2.0, 2.0}); // same ray
    CHECK_THROWS_AS(make_projector({v, w}), DegenerateInput);
}

TEST_CASE("expectation on eigenstates and superpositions") {
    const Projector p0 = make_projector({SystemState::basis_vector(2, 0)});
    CHECK(expectation(SystemState::basis_vector(2, 0), p0) == doctest::Approx(1.0));
    CHECK(expectation(SystemState::basis_vector(2, 1), p0) == doctest::Approx(0.0));
    CHECK(expectation(make_state({1.0, 1.0}), p0) == doctest::Approx(0.5));
}

TEST_CASE("expectation rejects mismatched dimensions") {
    const Projector p0 = make_projector({SystemState::basis_vector(3, 0)});
    CHECK_THROWS_AS(expectation(make_state({1.0, 1.0}), p0), DimensionMismatch);
}

TEST_CASE("weak value of an eigenstate is the eigenvalue") {
    const Projector p0 = make_projector({SystemState::basis_vector(2, 0)});
    const SystemState e0 = SystemState::basis_vector(2, 0);
    const WeakValue aw = weak_value(e0, e0, p0);
    CHECK(std::abs(aw.value - Complex(1.0)) < 1e-14);
}

TEST_CASE("weak value (1+i)/2 for the canonical selection pair") {
    const Projector p0 = make_projector({SystemState::basis_vector(2, 0)});
    const SystemState psi_i = make_state({1.0, 1.0});
    const SystemState psi_f = make_state({1.0, Complex(0.0, 1.0)});
    const WeakValue aw = weak_value(psi_i, psi_f, p0);
    CHECK(std::abs(aw.value - Complex(0.5, 0.5)) < 1e-14);
}

TEST_CASE("weak value amplification far outside the spectrum") {
    const double alpha = kPi / 4.0 + 0.01;
    const Projector p0 = make_projector({SystemState::basis_vector(2, 0)});
    const SystemState psi_i = make_state({1.0, 1.0});
    const SystemState psi_f = make_state({std::cos(alpha), -std::sin(alpha)});
    const WeakValue aw = weak_value(psi_i, psi_f, p0);
    // by hand: A_w = cos(a) / (cos(a) - sin(a))
    const double expected = std::cos(alpha) / (std::cos(alpha) - std::sin(alpha));
    CHECK(aw.re() == doctest::Approx(expected).epsilon(1e-12));
    CHECK(std::abs(aw.im()) < 1e-14);
    CHECK(std::abs(aw.value) > 10.0); // Re A_w escapes [0,1]
    CHECK(expected < -10.0);
}

TEST_CASE("weak value rejects orthogonal selection") {
    const Projector p0 = make_projector({SystemState::basis_vector(2, 0)});
    CHECK_THROWS_AS(weak_value(SystemState::basis_vector(2, 0),
                               SystemState::basis_vector(2, 1), p0),
                    OrthogonalPostSelection);
}

TEST_CASE("pps_context with identical selection") {
    const Projector p0 = make_projector({SystemState::basis_vector(2, 0)});
    const SystemState psi = make_state({1.0, 1.0});
    const PPSContext ctx = pps_context(psi, psi, p0);
    CHECK(ctx.chi == doctest::Approx(0.0));
    CHECK(ctx.a_w.re() == doctest::Approx(expectation(psi, p0)));
    CHECK(std::abs(ctx.a_w.im()) < 1e-15);
}

TEST_CASE("pps_context overlap and Pancharatnam phase") {
    const Projector p0 = make_projector({SystemState::basis_vector(2, 0)});
    const SystemState psi_i = make_state({1.0, 1.0});
    const SystemState psi_f = make_state({1.0, Complex(0.0, 1.0)});
    const PPSContext ctx = pps_context(psi_i, psi_f, p0);
    CHECK(std::abs(ctx.overlap - Complex(0.5, -0.5)) < 1e-14);
    CHECK(ctx.chi == doctest::Approx(-kPi / 4.0));
}

TEST_CASE("pps_context on a global-phase pair") {
    // |psi_f> = e^{i theta}|psi_i>  =>  <psi_f|psi_i> = e^{-i theta}
    const Projector p0 = make_projector({SystemState::basis_vector(2, 0)});
    const SystemState psi = make_state({1.0, 1.0});
    const double theta = 0.7;
    Vector shifted = psi.amplitudes() * std::exp(Complex(0.0, theta));
    const PPSContext ctx = pps_context(psi, SystemState(shifted), p0);
    CHECK(ctx.chi == doctest::Approx(-theta).epsilon(1e-12));
    CHECK(std::abs(ctx.a_w.value - Complex(0.5)) < 1e-12);
}

TEST_CASE("projectors are idempotent with {0,1} spectrum") {
    Rng rng(11);
    for (int i = 0; i < 50; ++i) {
        const int dim = 2 + static_cast<int>(rng.integer(3));
        const int rank = 1 + static_cast<int>(rng.integer(dim));
        const Projector p = random_projector(rng, dim, rank);
        CHECK(p.idempotency_residual() < 1e-10);
        // constructor already enforces the spectrum; cross-check the trace
        CHECK(p.matrix().trace().real() == doctest::Approx(rank).epsilon(1e-10));
    }
}

TEST_CASE("weak value reduces to the expectation for psi_i = psi_f") {
    Rng rng(12);
    for (int i = 0; i < 100; ++i) {
        const int dim = 2 + static_cast<int>(rng.integer(3));
        const SystemState psi = random_state(rng, dim);
        const SystemOperator a = random_hermitian(rng, dim);
        const WeakValue aw = weak_value(psi, psi, a);
        CHECK(std::abs(aw.value - Complex(expectation(psi, a))) < 1e-12);
    }
}

TEST_CASE("overlap reconstructs from chi and magnitude") {
    Rng rng(13);
    for (int i = 0; i < 50; ++i) {
        const int dim = 2 + static_cast<int>(rng.integer(3));
        const SystemState psi_i = random_state(rng, dim);
        const SystemState psi_f = random_state(rng, dim);
        if (std::abs(inner(psi_f, psi_i)) < 1e-3) continue;
        const Projector p = random_projector(rng, dim, 1);
        const PPSContext ctx = pps_context(psi_i, psi_f, p);
        const Complex rebuilt =
            std::exp(Complex(0.0, ctx.chi)) * std::abs(ctx.overlap);
        CHECK(std::abs(rebuilt - ctx.overlap) < 1e-12);
        CHECK(ctx.chi <= kPi);
        CHECK(ctx.chi > -kPi);
    }
}

TEST_CASE("SystemOperator rejects non-Hermitian input") {
    Matrix m(2, 2);
    m << Complex(1.0), Complex(0.5, 0.1), Complex(0.5, 0.1), Complex(0.0);
    CHECK_THROWS_AS(SystemOperator{m}, NotHermitian);
}

TEST_CASE("Projector rejects a Hermitian non-idempotent matrix") {
    Matrix m(2, 2);
    m << Complex(0.9), Complex(0.1), Complex(0.1), Complex(0.1);
    CHECK_THROWS_AS(Projector{m}, NotIdempotent);
}
