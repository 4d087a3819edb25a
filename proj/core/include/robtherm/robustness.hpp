#pragma once

// Generalized robustness with respect to a finitely generated free set.
//
// The witness program
//     max Tr[Y rho] - 1   s.t.  Y >= 0,  Tr[Y sigma_k] <= 1  for all k
// and the mixing program
//     min sum_k q_k - 1   s.t.  sum_k q_k sigma_k >= rho,  q >= 0
// are solved together. Every result carries a feasible witness (lower
// bound) and feasible mixing weights (upper bound); both are repaired to
// exact feasibility before they are reported.

#include <string>

#include "robtherm/free_sets.hpp"
#include "robtherm/linalg.hpp"

namespace robtherm {

enum class SolverStatus { Converged, MaxIterations, Infeasible };

std::string to_string(SolverStatus s);

struct RobustnessResult {
    double value{0.0};  // certified lower bound Tr[witness rho] - 1, clamped at 0
    HermitianOperator witness = HermitianOperator::zero(1);
    RealVector primal_weights;  // one weight per extreme point
    double lower{0.0};
    double upper{0.0};
    double gap{0.0};
    SolverStatus status{SolverStatus::Converged};
    int newton_iterations{0};
};

struct SolverOptions {
    double tol = 1e-7;                // absolute gap upper - lower
    int max_newton_iterations = 200;  // total budget across all barrier stages
    double barrier_growth = 20.0;     // t <- growth * t between stages
};

/// Witness-program solve. On MaxIterations the result still carries valid
/// two-sided bounds. A free `rho` (upper <= tol) returns value 0 with the
/// identity witness.
RobustnessResult robustness_dual(const DensityMatrix& rho, const FreeSetSpec& spec, double tol = 1e-7);
RobustnessResult robustness_dual(const DensityMatrix& rho, const FreeSetSpec& spec, const SolverOptions& options);

struct PrimalSolution {
    double upper_bound{0.0};
    RealVector weights;
    SolverStatus status{SolverStatus::Converged};
};

/// Mixing-program solve; returns feasible weights whose objective is within
/// tol of the optimum.
PrimalSolution robustness_primal(const DensityMatrix& rho, const FreeSetSpec& spec, double tol = 1e-7);

/// Residuals of an independent re-check of both certificates.
struct CertificateCheck {
    double witness_min_eigenvalue{0.0};
    double witness_max_constraint{0.0};  // max_k Tr[Y sigma_k]
    double weights_min{0.0};
    double mixture_min_eigenvalue{0.0};  // lambda_min(sum q sigma - rho)
    double lower{0.0};
    double upper{0.0};

    /// PSD within -1e-9, constraints within 1 + 1e-8, q >= 0,
    /// domination within -1e-9.
    bool witness_feasible() const;
    bool primal_feasible() const;
};

CertificateCheck check_certificates(const RobustnessResult& result, const DensityMatrix& rho, const FreeSetSpec& spec);

/// Feasibility of an arbitrary witness against the extreme points.
bool witness_is_feasible(const HermitianOperator& y, const FreeSetSpec& spec, double slack = 1e-8);

/// (sum_j |c_j|)^2 - 1
double robustness_pure_coherence(const PureState& psi);

/// Exact certificates for a pure state against the incoherent set: the
/// phase witness and weights q_j = |c_j| sum_k |c_k|, so lower = upper.
RobustnessResult coherence_closed_form(const PureState& psi);

/// (4 - 2 sqrt 2)^N - 1
double tstate_magic_robustness(int n_copies);

/// (I + (X + Y)/sqrt 2) / (1 + 1/sqrt 2)
HermitianOperator single_qubit_magic_witness();

struct Rank1Witness {
    double c{0.0};
    PureState y = PureState::basis(1, 0);
    double achieved{0.0};  // c |<y|psi>|^2 - 1

    HermitianOperator op() const;
};

class Rank1NotTight : public Error {
public:
    using Error::Error;
};

/// Rank-one witness c|y><y| for a pure state: top eigenpair of the solved
/// witness, rescaled so that max_k <y|sigma_k|y> c = 1. Throws
/// Rank1NotTight if it falls more than 10 tol below the solved value.
Rank1Witness rank1_witness_from_pure(const PureState& psi, const FreeSetSpec& spec, double tol = 1e-7);
/// Same extraction from an existing solve of |psi><psi|.
Rank1Witness rank1_witness_from_pure(const PureState& psi, const FreeSetSpec& spec, const RobustnessResult& solved,
                                     double tol);

/// Closed-form optimal coherence witness for a pure state: y_j = e^{i arg c_j}
/// / sqrt(d), c = d. The incoherent constraints are all tight.
Rank1Witness coherence_rank1_witness(const PureState& psi);

}  // namespace robtherm
