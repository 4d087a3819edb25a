#pragma once

// Finitely generated free sets, described by their extreme points.

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "robtherm/linalg.hpp"

namespace robtherm {

enum class FreeSetKind { Incoherent, Stabilizer, FiniteHull };

/// A convex free set given extensionally as the hull of finitely many
/// states. Copies share the (immutable) extreme-point list.
class FreeSetSpec {
public:
    /// States diagonal in the computational basis of C^dim.
    static FreeSetSpec incoherent(Eigen::Index dim);
    /// Convex hull of the pure n-qubit stabilizer states, n in 1..3.
    static FreeSetSpec stabilizer(int n_qubits);
    /// Convex hull of an explicit, non-empty list of states.
    static FreeSetSpec finite_hull(std::vector<DensityMatrix> states);

    FreeSetKind kind() const { return kind_; }
    Eigen::Index dim() const { return dim_; }
    /// dim for Incoherent, qubit count for Stabilizer, list size for hulls.
    int parameter() const { return parameter_; }
    std::size_t size() const { return points_->size(); }

    const std::vector<DensityMatrix>& extreme_points() const { return *points_; }
    /// Pure extreme points; empty when the hull was built from mixed states.
    const std::vector<PureState>& pure_extreme_points() const { return *pure_; }
    bool all_pure() const { return pure_->size() == points_->size(); }

    /// True when I/dim is known to lie in the hull by construction.
    bool contains_maximally_mixed() const { return kind_ != FreeSetKind::FiniteHull; }

    /// e.g. "incoherent(4)", "stabilizer(2)", "hull(3)"
    std::string describe() const;

private:
    FreeSetSpec() = default;

    FreeSetKind kind_{FreeSetKind::FiniteHull};
    Eigen::Index dim_{0};
    int parameter_{0};
    std::shared_ptr<const std::vector<DensityMatrix>> points_;
    std::shared_ptr<const std::vector<PureState>> pure_;
};

/// One Pauli string in binary symplectic form. Bit q of `x`/`z` refers to
/// qubit q (qubit 0 is the leftmost tensor factor).
struct PauliString {
    std::uint32_t x{0};
    std::uint32_t z{0};
    bool negative{false};
};

/// Matrix of a (Hermitian) Pauli string, with Y = iXZ on qubits where both
/// bits are set.
ComplexMatrix pauli_matrix(const PauliString& p, int n_qubits);
bool paulis_commute(const PauliString& a, const PauliString& b);

/// n independent, pairwise commuting signed Pauli generators.
struct StabilizerGroupDescriptor {
    int n{0};
    std::vector<PauliString> generators;
};

/// Checks independence over GF(2) and pairwise commutation; throws
/// ValidationError otherwise.
void validate(const StabilizerGroupDescriptor& group);

/// All maximal stabilizer groups with every sign pattern (n in 1..3).
std::vector<StabilizerGroupDescriptor> enumerate_stabilizer_groups(int n);

/// The unique joint +1 eigenstate of the generators.
PureState stabilizer_state(const StabilizerGroupDescriptor& group);

std::vector<PureState> incoherent_extreme_points(Eigen::Index dim);

/// All pure n-qubit stabilizer states, deduplicated up to global phase:
/// 6, 60 and 1080 states for n = 1, 2, 3.
std::vector<PureState> enumerate_stabilizer_states(int n);

/// Phase-normalized amplitude fingerprint at 1e-8 granularity.
std::vector<std::int64_t> state_fingerprint(const ComplexVector& amplitudes);

/// True iff the robustness of `rho` with respect to `spec` is <= tol.
bool membership(const FreeSetSpec& spec, const DensityMatrix& rho, double tol);

}  // namespace robtherm
