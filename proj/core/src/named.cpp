#include "robtherm/named.hpp"

#include <cmath>
#include <numbers>

namespace robtherm {

namespace {

constexpr Complex kI{0.0, 1.0};

// Global-phase-free fingerprint: divide by the phase of the first
// entry with non-negligible magnitude.
ComplexMatrix phase_normalized(const ComplexMatrix& u) {
    for (Eigen::Index k = 0; k < u.size(); ++k) {
        const Complex z = u.data()[k];
        if (std::abs(z) > 1e-6) return u * (std::abs(z) / z);
    }
    return u;
}

}  // namespace

ComplexMatrix pauli_x() {
    ComplexMatrix m(2, 2);
    m << 0.0, 1.0, 1.0, 0.0;
    return m;
}

ComplexMatrix pauli_y() {
    ComplexMatrix m(2, 2);
    m << 0.0, -kI, kI, 0.0;
    return m;
}

ComplexMatrix pauli_z() {
    ComplexMatrix m(2, 2);
    m << 1.0, 0.0, 0.0, -1.0;
    return m;
}

ComplexMatrix hadamard_gate() {
    ComplexMatrix m(2, 2);
    m << 1.0, 1.0, 1.0, -1.0;
    return m / std::numbers::sqrt2;
}

ComplexMatrix phase_gate() {
    ComplexMatrix m = ComplexMatrix::Identity(2, 2);
    m(1, 1) = kI;
    return m;
}

ComplexMatrix t_gate() {
    ComplexMatrix m = ComplexMatrix::Identity(2, 2);
    m(1, 1) = std::polar(1.0, std::numbers::pi / 4.0);
    return m;
}

PureState golden_state(Eigen::Index dim) {
    if (dim < 1) throw ValidationError("golden_state: dim must be >= 1");
    return PureState::normalized(ComplexVector::Ones(dim));
}

PureState plus_state() { return golden_state(2); }

PureState t_state() { return PureState::normalized(t_gate() * plus_state().amplitudes()); }

std::vector<ComplexMatrix> single_qubit_cliffords() {
    std::vector<ComplexMatrix> group{ComplexMatrix::Identity(2, 2)};
    const ComplexMatrix gens[] = {hadamard_gate(), phase_gate()};
    for (std::size_t head = 0; head < group.size(); ++head) {
        for (const auto& g : gens) {
            ComplexMatrix cand = phase_normalized(g * group[head]);
            bool seen = false;
            for (const auto& u : group) {
                if ((u - cand).cwiseAbs().maxCoeff() < 1e-9) {
                    seen = true;
                    break;
                }
            }
            if (!seen) group.push_back(cand);
        }
    }
    return group;
}

ComplexMatrix embed_single_qubit(const ComplexMatrix& u, int target, int n_qubits) {
    if (target < 0 || target >= n_qubits) throw ValidationError("embed_single_qubit: target out of range");
    ComplexMatrix out = ComplexMatrix::Identity(1, 1);
    for (int q = 0; q < n_qubits; ++q) out = tensor(out, q == target ? u : ComplexMatrix::Identity(2, 2));
    return out;
}

ComplexMatrix cnot_gate(int control, int target, int n_qubits) {
    if (control == target || control < 0 || target < 0 || control >= n_qubits || target >= n_qubits) {
        throw ValidationError("cnot_gate: invalid qubits");
    }
    const Eigen::Index dim = Eigen::Index{1} << n_qubits;
    ComplexMatrix out = ComplexMatrix::Zero(dim, dim);
    const Eigen::Index cbit = Eigen::Index{1} << (n_qubits - 1 - control);
    const Eigen::Index tbit = Eigen::Index{1} << (n_qubits - 1 - target);
    for (Eigen::Index i = 0; i < dim; ++i) out((i & cbit) ? (i ^ tbit) : i, i) = 1.0;
    return out;
}

}  // namespace robtherm
