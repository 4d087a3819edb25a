#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "robtherm/linalg.hpp"
#include "robtherm/named.hpp"
#include "robtherm/random.hpp"

using namespace robtherm;

namespace {

bool is_valid_state(const ComplexMatrix& m, double tol = 1e-9) {
    const HermitianOperator h(m);
    const Eigensystem es = hermitian_eig(h);
    return std::abs(m.trace().real() - 1.0) < tol && es.values.minCoeff() > -tol;
}

}  // namespace

TEST(Beta, RejectsNegativeAndNan) {
    EXPECT_THROW(Beta::finite(-1.0), ValidationError);
    EXPECT_THROW(Beta::finite(std::nan("")), ValidationError);
    EXPECT_THROW(Beta::finite(std::numeric_limits<double>::infinity()), ValidationError);
    EXPECT_TRUE(Beta::infinite().is_infinite());
    EXPECT_EQ(Beta::infinite().temperature(), 0.0);
    EXPECT_DOUBLE_EQ(Beta::finite(4.0).temperature(), 0.25);
}

TEST(HermitianOperator, RejectsNonHermitian) {
    ComplexMatrix m = ComplexMatrix::Zero(2, 2);
    m(0, 1) = 1.0;
    EXPECT_THROW(HermitianOperator{m}, ValidationError);
    m(1, 0) = 1.0;
    EXPECT_NO_THROW(HermitianOperator{m});
}

TEST(DensityMatrix, RejectsBadTraceAndNegativeEigenvalues) {
    EXPECT_THROW(DensityMatrix(ComplexMatrix(ComplexMatrix::Identity(2, 2))), ValidationError);
    ComplexMatrix m = ComplexMatrix::Zero(2, 2);
    m(0, 0) = 1.5;
    m(1, 1) = -0.5;
    EXPECT_THROW(DensityMatrix{m}, ValidationError);
}

TEST(PureState, RejectsUnnormalized) {
    ComplexVector v = ComplexVector::Ones(2);
    EXPECT_THROW(PureState{v}, ValidationError);
    EXPECT_NEAR(PureState::normalized(v).amplitudes().norm(), 1.0, 1e-15);
    EXPECT_THROW(PureState::normalized(ComplexVector::Zero(3)), ValidationError);
}

TEST(DensityMatrix, RandomConstructorsSatisfyInvariants) {
    Rng rng(11);
    for (int trial = 0; trial < 100; ++trial) {
        const Eigen::Index d = 2 + trial % 7;
        EXPECT_TRUE(is_valid_state(random_density_matrix(d, rng).matrix()));
        EXPECT_TRUE(is_valid_state(random_density_matrix(d, rng, 1 + trial % d).matrix()));
        EXPECT_TRUE(is_valid_state(DensityMatrix::from_pure(random_pure_state(d, rng)).matrix()));
        EXPECT_TRUE(is_valid_state(gibbs_state(random_hermitian(d, rng), Beta::finite(0.3 * trial)).matrix()));
        EXPECT_TRUE(is_valid_state(gibbs_state(random_hermitian(d, rng), Beta::infinite()).matrix()));
    }
    EXPECT_TRUE(is_valid_state(DensityMatrix::maximally_mixed(5).matrix()));
}

TEST(HermitianEig, EigenvalueSumEqualsTrace) {
    Rng rng(12);
    for (int trial = 0; trial < 50; ++trial) {
        const HermitianOperator h = random_hermitian(2 + trial % 10, rng);
        const Eigensystem es = hermitian_eig(h);
        EXPECT_NEAR(es.values.sum(), h.matrix().trace().real(), 1e-9);
        for (Eigen::Index i = 1; i < es.values.size(); ++i) EXPECT_LE(es.values(i - 1), es.values(i));
    }
}

TEST(PartialTrace, RecoversProductFactors) {
    Rng rng(13);
    for (int trial = 0; trial < 20; ++trial) {
        const Eigen::Index da = 2 + trial % 3, db = 2 + (trial / 3) % 3;
        const DensityMatrix a = random_density_matrix(da, rng);
        const DensityMatrix b = random_density_matrix(db, rng);
        const DensityMatrix ab = tensor(a, b);
        EXPECT_LT(max_entry_norm(partial_trace(ab, Subsystem::B, {da, db}).matrix() - a.matrix()), 1e-12);
        EXPECT_LT(max_entry_norm(partial_trace(ab, Subsystem::A, {da, db}).matrix() - b.matrix()), 1e-12);
    }
}

TEST(PartialTrace, RejectsMismatchedDims) {
    EXPECT_THROW(partial_trace(DensityMatrix::maximally_mixed(4), Subsystem::A, {2, 3}), DimensionMismatch);
}

TEST(GibbsState, MatchesMatrixExponential) {
    Rng rng(14);
    for (int trial = 0; trial < 30; ++trial) {
        const HermitianOperator h = random_hermitian(2 + trial % 6, rng);
        const double beta = 0.1 + 0.4 * trial;
        const ComplexMatrix expected = oracle::gibbs_expm(h.matrix(), beta);
        EXPECT_LT(max_entry_norm(gibbs_state(h, Beta::finite(beta)).matrix() - expected), 1e-10) << trial;
    }
}

TEST(GibbsState, ZeroTemperatureIsUniformOnGroundSpace) {
    const HermitianOperator h = HermitianOperator::diagonal((RealVector(4) << 1.0, 0.0, 3.0, 0.0).finished());
    const ComplexMatrix tau = gibbs_state(h, Beta::infinite()).matrix();
    EXPECT_NEAR(tau(1, 1).real(), 0.5, 1e-15);
    EXPECT_NEAR(tau(3, 3).real(), 0.5, 1e-15);
    EXPECT_NEAR(tau(0, 0).real(), 0.0, 1e-15);
}

TEST(GibbsState, BetaZeroIsMaximallyMixed) {
    Rng rng(15);
    const ComplexMatrix tau = gibbs_state(random_hermitian(3, rng), Beta::finite(0.0)).matrix();
    EXPECT_LT(max_entry_norm(tau - ComplexMatrix::Identity(3, 3) / 3.0), 1e-14);
}

TEST(GibbsState, MinimizesFreeEnergy) {
    Rng rng(16);
    const HermitianOperator h = random_hermitian(4, rng);
    const double beta = 1.7;
    const DensityMatrix tau = gibbs_state(h, Beta::finite(beta));
    const double f_tau = expectation(h, tau) - von_neumann_entropy(tau) / beta;
    for (int trial = 0; trial < 100; ++trial) {
        const DensityMatrix rho = random_density_matrix(4, rng);
        EXPECT_LE(f_tau, expectation(h, rho) - von_neumann_entropy(rho) / beta + 1e-12);
    }
}

TEST(Entropy, MatchesShannonOracle) {
    Rng rng(17);
    for (int trial = 0; trial < 20; ++trial) {
        const RealVector p = random_simplex_point(2 + trial % 8, rng);
        EXPECT_NEAR(entropy_of_spectrum(p), oracle::shannon_entropy({p.data(), p.data() + p.size()}), 1e-13);
    }
    EXPECT_NEAR(von_neumann_entropy(DensityMatrix::maximally_mixed(6)), std::log(6.0), 1e-12);
    EXPECT_NEAR(von_neumann_entropy(DensityMatrix::from_pure(golden_state(5))), 0.0, 1e-12);
}

TEST(LogPartition, MatchesDirectSum) {
    const std::vector<double> e{0.0, 0.3, 1.1, 2.5};
    const RealVector ev = Eigen::Map<const RealVector>(e.data(), e.size());
    for (double beta : {0.0, 0.5, 3.0, 20.0})
        EXPECT_NEAR(log_partition(ev, beta), oracle::log_partition_direct(e, beta), 1e-12);
    // Stable where the direct sum underflows.
    EXPECT_NEAR(log_partition((RealVector(2) << 1000.0, 1000.0).finished(), 1.0), -1000.0 + std::log(2.0), 1e-9);
}

TEST(Tensor, PowerMatchesRepeatedProduct) {
    const PureState t = t_state();
    const PureState t3 = tensor_power(t, 3);
    const PureState direct = tensor(tensor(t, t), t);
    EXPECT_LT((t3.amplitudes() - direct.amplitudes()).norm(), 1e-15);
    EXPECT_EQ(t3.dim(), 8);
}

TEST(Named, GatesAreUnitary) {
    for (const ComplexMatrix& u : {hadamard_gate(), phase_gate(), t_gate(), pauli_x(), pauli_y(), pauli_z()})
        EXPECT_LT(max_entry_norm(u * u.adjoint() - ComplexMatrix::Identity(2, 2)), 1e-15);
    EXPECT_EQ(single_qubit_cliffords().size(), 24u);
    const ComplexMatrix t2 = t_gate() * t_gate();
    EXPECT_LT(max_entry_norm(t2 - phase_gate()), 1e-15);
}

TEST(Named, GoldenAndTStateAmplitudes) {
    const PureState g = golden_state(4);
    for (Eigen::Index i = 0; i < 4; ++i) EXPECT_NEAR(std::abs(g.amplitudes()(i)), 0.5, 1e-15);
    const PureState t = t_state();
    EXPECT_NEAR(std::arg(t.amplitudes()(1)), M_PI / 4.0, 1e-15);
}
