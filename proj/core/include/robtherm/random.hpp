#pragma once

// Seeded random ensembles for property tests, sweeps and benchmarks.

#include <cstdint>
#include <random>
#include <vector>

#include "robtherm/linalg.hpp"

namespace robtherm {

using Rng = std::mt19937_64;

ComplexMatrix random_ginibre(Eigen::Index rows, Eigen::Index cols, Rng& rng);
HermitianOperator random_hermitian(Eigen::Index dim, Rng& rng);
/// Haar-random pure state.
PureState random_pure_state(Eigen::Index dim, Rng& rng);
/// G G^dagger / Tr, with G of shape dim x rank (rank defaults to dim).
DensityMatrix random_density_matrix(Eigen::Index dim, Rng& rng, Eigen::Index rank = 0);
ComplexMatrix random_unitary(Eigen::Index dim, Rng& rng);
/// Kraus operators of a random channel, cut from a Haar isometry C^d -> C^{d n}.
std::vector<ComplexMatrix> random_kraus(Eigen::Index dim, int n_kraus, Rng& rng);
/// Uniform point on the probability simplex.
RealVector random_simplex_point(Eigen::Index size, Rng& rng);

}  // namespace robtherm
