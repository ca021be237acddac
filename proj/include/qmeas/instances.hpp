#pragma once

#include "qmeas/hilbert.hpp"
#include "qmeas/pointer.hpp"
#include "qmeas/random.hpp"

namespace qmeas {

/// Haar-ish random state / unitary / projector generators used by the
/// randomized verification suite and the tests.

SystemState random_state(Rng& rng, int dim);

Matrix random_unitary(Rng& rng, int dim);

/// Rank-r projector from the first r columns of a random unitary.
Projector random_projector(Rng& rng, int dim, int rank);

/// Random Hermitian operator with entries O(scale).
SystemOperator random_hermitian(Rng& rng, int dim, double scale = 1.0);

/// Contained wavepacket on the given grid: a superposition of 2-3 Gaussians
/// with random centers, widths, momentum boosts and a small quadratic phase.
PointerState random_wavepacket(Rng& rng, const PointerGrid& grid);

struct PsInstance {
    SystemState psi;
    Projector a;
    double gamma;
};

struct PpsInstance {
    SystemState psi_i;
    SystemState psi_f;
    Projector a;
    double gamma;
};

/// d in {2,3,4}, rank in 1..d, gamma in [0.01, 5] (pointer sigma = 1 units).
PsInstance random_ps_instance(Rng& rng);

/// As above; psi_f is resampled until |<psi_f|psi_i>| >= min_overlap so the
/// post-selected state stays numerically well-conditioned.
PpsInstance random_pps_instance(Rng& rng, double min_overlap = 0.1);

} // namespace qmeas
