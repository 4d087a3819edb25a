#pragma once

// Channels on C^d (equal input and output dimension), their Choi states, and
// the cost bounds for resource generation and resourceful channels.

#include <vector>

#include "robtherm/free_sets.hpp"
#include "robtherm/linalg.hpp"
#include "robtherm/robustness.hpp"
#include "robtherm/thermo.hpp"

namespace robtherm {

class QuantumChannel {
public:
    /// Validates a non-empty list of square d x d Kraus operators with
    /// sum K^dagger K = I within 1e-9.
    explicit QuantumChannel(std::vector<ComplexMatrix> kraus);

    static QuantumChannel unitary(const ComplexMatrix& u);
    static QuantumChannel identity(Eigen::Index dim);
    /// rho -> I/d, with the d^2 Kraus operators |i><j| / sqrt d.
    static QuantumChannel completely_depolarizing(Eigen::Index dim);

    Eigen::Index dim() const { return dim_; }
    const std::vector<ComplexMatrix>& kraus() const { return kraus_; }

    /// sum_i K_i rho K_i^dagger
    DensityMatrix apply(const DensityMatrix& rho) const;

private:
    Eigen::Index dim_{0};
    std::vector<ComplexMatrix> kraus_;
};

/// J = (E (x) I)|Phi><Phi| on C^d (x) C^d: the channel output is the first
/// factor, the reference the second.
class ChoiState {
public:
    /// Checks that tracing out the output leaves I/d within 1e-8.
    ChoiState(DensityMatrix state, Eigen::Index dim);

    const DensityMatrix& state() const { return state_; }
    Eigen::Index dim() const { return dim_; }

private:
    DensityMatrix state_;
    Eigen::Index dim_;
};

ChoiState choi_state(const QuantumChannel& channel);

/// d Tr_B[(I (x) rho^T) J]
DensityMatrix apply_via_choi(const ChoiState& choi, const DensityMatrix& rho);

/// Robustness of the Choi state against a bipartite free-state set. The hull
/// of `bipartite_spec` is assumed to contain the Choi states of all free
/// channels, which makes the value a certified lower bound on the channel
/// robustness.
RobustnessResult channel_robustness_lower(const QuantumChannel& channel, const FreeSetSpec& bipartite_spec,
                                          double tol = 1e-8);

/// F_H(J) - F_H(tau_H)
double channel_cost_proxy(const QuantumChannel& channel, const HermitianOperator& h_ab, Beta beta);

/// Cost of generating E(sigma_in) from a pure free input: the achieved
/// ratio max_sigma (F(sigma) - F(sigma_in)) / (F(E(sigma_in)) - F(sigma_in)) at
/// H = lambda Y* against 1 / (R - S(E(sigma_in))/(lambda beta)).
BoundReport theorem3_bound(const QuantumChannel& channel, const DensityMatrix& sigma_in, const FreeSetSpec& spec,
                           const ThermoContext& ctx, double tol = 1e-8);

/// Relative work cost of the free bipartite extreme points against the Choi
/// state at H_AB = lambda Z*.
BoundReport theorem4_bound(const QuantumChannel& channel, const FreeSetSpec& bipartite_spec, const ThermoContext& ctx,
                           double tol = 1e-8);

}  // namespace robtherm
