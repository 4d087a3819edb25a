#pragma once

// Free-energy bookkeeping for the witness-Hamiltonian work-extraction cycle
// and numerical checks of the advantage and cost bounds it implies.
//
// All energies share the unit of the Hamiltonian; entropies are in nats.
// beta = 0 is rejected throughout (the entropy weight 1/beta diverges);
// beta = infinity takes the ground-space path.

#include <optional>
#include <string>

#include "robtherm/free_sets.hpp"
#include "robtherm/linalg.hpp"
#include "robtherm/robustness.hpp"

namespace robtherm {

struct ThermoContext {
    Beta beta = Beta::infinite();
    double lambda = 1.0;  // Hamiltonian scale, H = lambda * witness

    /// Validates lambda > 0 and beta > 0.
    static ThermoContext make(Beta beta, double lambda);
    /// lambda * beta, +inf at zero temperature.
    double lambda_beta() const;
    /// 1/(lambda beta), 0 at zero temperature.
    double entropy_weight() const;
};

/// Per-stage work of the four-stroke cycle: (a) isothermal ramp 0 -> lambda Y,
/// (b) energy-preserving swap with the fuel, (c) thermalization,
/// (d) isothermal ramp back to 0.
struct ProtocolTrace {
    double dW_a{0.0};
    double dW_b{0.0};
    double dW_c{0.0};
    double dW_d{0.0};
    double total{0.0};
    HermitianOperator hamiltonian = HermitianOperator::zero(1);
    DensityMatrix final_state = DensityMatrix::maximally_mixed(1);
};

enum class BoundDirection { AtLeast, AtMost };

/// One inequality instance: `lhs >= rhs` (AtLeast) or `lhs <= rhs` (AtMost).
struct BoundReport {
    std::string check;
    BoundDirection direction{BoundDirection::AtLeast};
    double lhs{0.0};
    double rhs{0.0};
    bool satisfied{false};
    double slack{0.0};  // signed margin, >= 0 when satisfied
    bool precondition_met{false};
    double robustness{0.0};
    std::string note;  // skip reason or degenerate-case remark
};

inline constexpr double kBoundSlack = 1e-9;

/// Fills `satisfied` and `slack` from lhs/rhs/direction.
BoundReport finalize(BoundReport report, double slack = kBoundSlack);

struct ThermalSummary {
    double free_energy{0.0};
    double entropy{0.0};
};

/// Free energy and entropy of the Gibbs state for a Hamiltonian spectrum
/// given in ascending order.
ThermalSummary thermal_summary(const RealVector& energies, Beta beta);
ThermalSummary thermal_summary(const HermitianOperator& h, Beta beta);

/// Tr[H rho] - S(rho)/beta
double free_energy(const DensityMatrix& rho, const HermitianOperator& h, Beta beta);
/// F_H of the Gibbs state, -ln Z / beta, or the ground energy at beta = inf.
double thermal_free_energy(const HermitianOperator& h, Beta beta);
/// F_H(rho) - F_H(tau_H)
double extractable_work(const DensityMatrix& rho, const HermitianOperator& h, Beta beta);
/// Preparation cost from the thermal state; the same functional as
/// extractable_work.
double work_cost(const DensityMatrix& rho, const HermitianOperator& h, Beta beta);

struct FreeWorkMaximum {
    double value{0.0};
    std::size_t argmax{0};
};

/// Maximum extractable work over the free set. F_H is convex in rho, so the
/// maximum over the hull is attained at an extreme point; ties go to the
/// lowest index.
FreeWorkMaximum max_free_extractable_work(const FreeSetSpec& spec, const HermitianOperator& h, Beta beta);

/// 1 + (R - S(rho)/(lambda beta)) / (1 + S(tau)/(lambda beta)); 1 + R at beta = inf.
double theorem1_bound(double robustness, double entropy_rho, double entropy_tau, const ThermoContext& ctx);
/// R > 0 and lambda >= S(rho) / (beta R).
bool advantage_precondition(double robustness, double entropy_rho, const ThermoContext& ctx);

ProtocolTrace simulate_protocol(const DensityMatrix& rho, const HermitianOperator& witness, const ThermoContext& ctx);

/// Witness driving the protocol, with the robustness it certifies
/// (Tr[Y rho] - 1). Pure states get a rank-one witness when it is tight.
struct ProtocolWitness {
    HermitianOperator witness = HermitianOperator::zero(1);
    double robustness{0.0};
    RobustnessResult solve;
    std::optional<Rank1Witness> rank1;
};

ProtocolWitness protocol_witness(const DensityMatrix& rho, const FreeSetSpec& spec, double tol = 1e-8);

/// W(rho) / max_sigma W(sigma) under H = lambda * witness.
double achieved_advantage(const DensityMatrix& rho, const HermitianOperator& witness, const FreeSetSpec& spec,
                          const ThermoContext& ctx);

/// Achieved advantage ratio against the lower bound of the advantage theorem.
BoundReport verify_theorem1(const DensityMatrix& rho, const FreeSetSpec& spec, const ThermoContext& ctx,
                            double tol = 1e-8);
BoundReport verify_theorem1(const DensityMatrix& rho, const FreeSetSpec& spec, const ProtocolWitness& pw,
                            const ThermoContext& ctx);

struct Eq10Options {
    double epsilon = 0.05;          // accepted shortfall factor (1 - epsilon)
    double lambda_beta_factor = 100.0;  // "large enough": lambda beta >= C ln d
    double tol = 1e-8;
};

/// min over free extreme points of W(rho)/W(sigma) against (1 + R)(1 - epsilon).
/// Free states with W(sigma) <= 1e-12 are skipped and noted.
BoundReport verify_eq10_ratio(const DensityMatrix& rho, const FreeSetSpec& spec, const ThermoContext& ctx,
                              const Eq10Options& options = {});
BoundReport verify_eq10_ratio(const DensityMatrix& rho, const FreeSetSpec& spec, const ProtocolWitness& pw,
                              const ThermoContext& ctx, const Eq10Options& options = {});

/// Gibbs state of lambda c |y><y| in closed form:
/// (I - (1 - e^{-beta lambda c})|y><y|) / (d - (1 - e^{-beta lambda c})).
DensityMatrix residual_thermal_closed_form(const PureState& y, double c, const ThermoContext& ctx);

/// Robustness (certified upper bound) of the residual thermal state against
/// 1/(d - 1). Requires I/d to lie in `spec_prime`.
BoundReport verify_theorem2(const PureState& y, double c, const ThermoContext& ctx, const FreeSetSpec& spec_prime,
                            double tol = 1e-8);

/// (1 + S(tau)/(lambda beta)) / (1 + R + (S(tau) - S(rho))/(lambda beta)); 1/(1 + R) at beta = inf.
double corollary1_bound(double robustness, double entropy_rho, double entropy_tau, const ThermoContext& ctx);

/// max_sigma W_cost(sigma) / W_cost(rho) at H = lambda Y* against corollary1_bound.
BoundReport verify_xi_cost(const DensityMatrix& rho, const FreeSetSpec& spec, const ThermoContext& ctx,
                           double tol = 1e-8);
BoundReport verify_xi_cost(const DensityMatrix& rho, const FreeSetSpec& spec, const ProtocolWitness& pw,
                           const ThermoContext& ctx);

/// Same check with an explicit witness whose objective Tr[Y rho] - 1 is used
/// as the robustness.
BoundReport verify_xi_cost_with_witness(const DensityMatrix& rho, const HermitianOperator& witness,
                                        const FreeSetSpec& spec, const ThermoContext& ctx);

}  // namespace robtherm
