#pragma once

// Named states, Pauli matrices and single-qubit gates.

#include <vector>

#include "robtherm/linalg.hpp"

namespace robtherm {

ComplexMatrix pauli_x();
ComplexMatrix pauli_y();
ComplexMatrix pauli_z();
ComplexMatrix hadamard_gate();
ComplexMatrix phase_gate();  // S = diag(1, i)
ComplexMatrix t_gate();      // diag(1, e^{i pi/4})

/// Equal-magnitude superposition of all `dim` basis states.
PureState golden_state(Eigen::Index dim);
PureState plus_state();
/// T|+> = (|0> + e^{i pi/4}|1>)/sqrt(2)
PureState t_state();

/// The 24 single-qubit Clifford unitaries modulo global phase, generated
/// from H and S.
std::vector<ComplexMatrix> single_qubit_cliffords();

/// U applied to qubit `target` of an n-qubit register (qubit 0 is the
/// leftmost tensor factor).
ComplexMatrix embed_single_qubit(const ComplexMatrix& u, int target, int n_qubits);
ComplexMatrix cnot_gate(int control, int target, int n_qubits);

}  // namespace robtherm
