#include <gtest/gtest.h>

#include <cmath>

#include "frozen_values.hpp"
#include "robtherm/channels.hpp"
#include "robtherm/named.hpp"
#include "robtherm/random.hpp"

using namespace robtherm;

namespace {

ThermoContext at(double lambda, double beta) { return ThermoContext::make(Beta::finite(beta), lambda); }
ThermoContext zero_temperature(double lambda) { return ThermoContext::make(Beta::infinite(), lambda); }

const FreeSetSpec& bipartite_stabilizer() {
    static const FreeSetSpec spec = FreeSetSpec::stabilizer(2);
    return spec;
}

}  // namespace

TEST(QuantumChannel, RejectsNonTracePreserving) {
    EXPECT_THROW(QuantumChannel({ComplexMatrix::Identity(2, 2) * 0.9}), ValidationError);
    EXPECT_THROW(QuantumChannel(std::vector<ComplexMatrix>{}), ValidationError);
    EXPECT_NO_THROW(QuantumChannel::completely_depolarizing(3));
}

TEST(Choi, RoundTripOnRandomChannels) {
    Rng rng(51);
    for (int trial = 0; trial < 100; ++trial) {
        const Eigen::Index d = trial % 2 ? 4 : 2;
        const QuantumChannel ch(random_kraus(d, 1 + trial % 4, rng));
        const ChoiState j = choi_state(ch);
        const DensityMatrix rho = random_density_matrix(d, rng);
        EXPECT_LT(max_entry_norm(apply_via_choi(j, rho).matrix() - ch.apply(rho).matrix()), 1e-9);
    }
}

TEST(Choi, ReferenceMarginalIsMaximallyMixed) {
    Rng rng(52);
    const QuantumChannel ch(random_kraus(3, 2, rng));
    const DensityMatrix ref = partial_trace(choi_state(ch).state(), Subsystem::A, {3, 3});
    EXPECT_LT(max_entry_norm(ref.matrix() - ComplexMatrix::Identity(3, 3) / 3.0), 1e-12);
    EXPECT_THROW(ChoiState(DensityMatrix::from_pure(PureState::basis(4, 0)), 2), ValidationError);
}

TEST(Choi, UnitaryChannelsHaveZeroEntropy) {
    Rng rng(53);
    for (int trial = 0; trial < 20; ++trial) {
        const QuantumChannel u = QuantumChannel::unitary(random_unitary(2 + trial % 3, rng));
        EXPECT_NEAR(von_neumann_entropy(choi_state(u).state()), 0.0, 1e-9);
    }
    EXPECT_NEAR(von_neumann_entropy(choi_state(QuantumChannel::completely_depolarizing(2)).state()), std::log(4.0),
                1e-12);
}

TEST(ChannelRobustness, CliffordIsFree) {
    for (const ComplexMatrix& u : {hadamard_gate(), phase_gate(), ComplexMatrix(ComplexMatrix::Identity(2, 2))}) {
        const RobustnessResult r = channel_robustness_lower(QuantumChannel::unitary(u), bipartite_stabilizer());
        EXPECT_LE(r.value, 1e-6);
    }
}

TEST(ChannelRobustness, TGateRegressionConstant) {
    const RobustnessResult r = channel_robustness_lower(QuantumChannel::unitary(t_gate()), bipartite_stabilizer());
    EXPECT_GT(r.value, 0.0);
    EXPECT_NEAR(r.value, frozen::kTGateChoiStabilizer, 1e-6);
}

TEST(ChannelRobustness, StableUnderCliffordConjugation) {
    const double base =
        channel_robustness_lower(QuantumChannel::unitary(t_gate()), bipartite_stabilizer()).value;
    const auto cliffords = single_qubit_cliffords();
    for (std::size_t i = 0; i < cliffords.size(); i += 5) {
        const ComplexMatrix& c = cliffords[i];
        const ComplexMatrix u = c * t_gate() * c.adjoint();
        EXPECT_NEAR(channel_robustness_lower(QuantumChannel::unitary(u), bipartite_stabilizer()).value, base, 1e-6);
    }
}

TEST(GenerationCost, TGateCircuit) {
    const QuantumChannel ch = QuantumChannel::unitary(t_gate() * hadamard_gate());
    const DensityMatrix in = DensityMatrix::from_pure(PureState::basis(2, 0));
    const FreeSetSpec spec = FreeSetSpec::stabilizer(1);
    for (const ThermoContext& ctx : {zero_temperature(1.0), at(1.0, 1e4)}) {
        const BoundReport r = theorem3_bound(ch, in, spec, ctx);
        EXPECT_TRUE(r.precondition_met) << r.note;
        EXPECT_TRUE(r.satisfied) << r.lhs << " vs " << r.rhs;
    }
    const BoundReport r = theorem3_bound(ch, in, spec, zero_temperature(1.0));
    EXPECT_NEAR(r.rhs, 1.0 / tstate_magic_robustness(1), 1e-5);
}

TEST(GenerationCost, FreeOutputFlagged) {
    const BoundReport r = theorem3_bound(QuantumChannel::unitary(hadamard_gate()),
                                         DensityMatrix::from_pure(PureState::basis(2, 0)), FreeSetSpec::stabilizer(1),
                                         zero_temperature(1.0));
    EXPECT_FALSE(r.precondition_met);
    EXPECT_FALSE(r.note.empty());
}

TEST(ChannelCostBound, TGateBounds) {
    const QuantumChannel t = QuantumChannel::unitary(t_gate());
    const BoundReport zero = theorem4_bound(t, bipartite_stabilizer(), zero_temperature(1.0));
    EXPECT_TRUE(zero.satisfied);
    EXPECT_NEAR(zero.rhs, 1.0 / (1.0 + frozen::kTGateChoiStabilizer), 1e-6);
    const BoundReport warm = theorem4_bound(t, bipartite_stabilizer(), at(1.0, 1e4));
    EXPECT_TRUE(warm.precondition_met);
    EXPECT_TRUE(warm.satisfied) << warm.lhs << " vs " << warm.rhs;
}

TEST(ChannelCostBound, CliffordIsDegenerate) {
    const BoundReport r = theorem4_bound(QuantumChannel::unitary(hadamard_gate()), bipartite_stabilizer(),
                                         zero_temperature(1.0));
    EXPECT_FALSE(r.precondition_met);
    EXPECT_EQ(r.rhs, 1.0);
    EXPECT_FALSE(r.note.empty());
}

TEST(ChannelCost, ProxyIsWorkCostOfChoi) {
    const QuantumChannel t = QuantumChannel::unitary(t_gate());
    const HermitianOperator h = single_qubit_magic_witness();
    const HermitianOperator hab = tensor(h, HermitianOperator::identity(2));
    const double proxy = channel_cost_proxy(t, hab, Beta::finite(2.0));
    EXPECT_NEAR(proxy, work_cost(choi_state(t).state(), hab, Beta::finite(2.0)), 1e-14);
    EXPECT_GE(proxy, 0.0);
}
