#pragma once

#include <complex>

#include <Eigen/Dense>

#include "qaccel/circuit.hpp"
#include "qaccel/common.hpp"

namespace qaccel {

// Hard ceiling on simulated register width; run_statevector throws
// CapacityError beyond it (2^12 complex doubles = 64 KiB per state).
inline constexpr int kDefaultQubitCap = 12;

// Dense amplitude vector over the computational basis. Amplitude index i
// encodes qubit k as bit k of i (qubit 0 is the least significant bit).
struct StateVector {
    int n_qubits = 0;
    Eigen::VectorXcd amplitudes;

    static StateVector zero(int n_qubits);

    std::size_t dim() const { return static_cast<std::size_t>(amplitudes.size()); }
    double norm_sq() const { return amplitudes.squaredNorm(); }
};

// Applies one gate in place.
void apply_gate(StateVector& state, const Gate& gate);

// Runs the whole circuit from |0...0>. Throws CapacityError when
// circuit.n_qubits exceeds qubit_cap and ValidationError for n_qubits <= 0.
StateVector run_statevector(const Circuit& circuit, int qubit_cap = kDefaultQubitCap);

// Dense 2^n x 2^n unitary of a single gate embedded in an n-qubit register.
// Intended for small n (tests, diagnostics).
Eigen::MatrixXcd gate_matrix(const Gate& gate, int n_qubits);

// Dense unitary of the full circuit (product of gate matrices).
Eigen::MatrixXcd circuit_matrix(const Circuit& circuit);

} // namespace qaccel
