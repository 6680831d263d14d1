#include "qaccel/statevector.hpp"

#include <cmath>

namespace qaccel {

namespace {

using cd = std::complex<double>;

// Applies a general 2x2 unitary [[u00,u01],[u10,u11]] to qubit q.
void apply_1q(StateVector& state, int q, cd u00, cd u01, cd u10, cd u11) {
    const std::size_t dim = state.dim();
    const std::size_t bit = std::size_t{1} << q;
    for (std::size_t i = 0; i < dim; ++i) {
        if (i & bit) continue;
        const std::size_t j = i | bit;
        const cd a0 = state.amplitudes[static_cast<Eigen::Index>(i)];
        const cd a1 = state.amplitudes[static_cast<Eigen::Index>(j)];
        state.amplitudes[static_cast<Eigen::Index>(i)] = u00 * a0 + u01 * a1;
        state.amplitudes[static_cast<Eigen::Index>(j)] = u10 * a0 + u11 * a1;
    }
}

// Multiplies amplitudes whose bits at (a, b) satisfy the parity predicate.
void apply_rzz(StateVector& state, int a, int b, double phi) {
    // exp(+i phi Z(x)Z): even parity picks up e^{+i phi}, odd e^{-i phi}.
    const cd even = std::polar(1.0, phi);
    const cd odd = std::polar(1.0, -phi);
    const std::size_t dim = state.dim();
    const std::size_t bit_a = std::size_t{1} << a;
    const std::size_t bit_b = std::size_t{1} << b;
    for (std::size_t i = 0; i < dim; ++i) {
        const bool pa = (i & bit_a) != 0;
        const bool pb = (i & bit_b) != 0;
        state.amplitudes[static_cast<Eigen::Index>(i)] *= (pa == pb) ? even : odd;
    }
}

void apply_cz(StateVector& state, int a, int b) {
    const std::size_t dim = state.dim();
    const std::size_t mask = (std::size_t{1} << a) | (std::size_t{1} << b);
    for (std::size_t i = 0; i < dim; ++i) {
        if ((i & mask) == mask) state.amplitudes[static_cast<Eigen::Index>(i)] *= -1.0;
    }
}

void apply_cnot(StateVector& state, int control, int target) {
    const std::size_t dim = state.dim();
    const std::size_t cbit = std::size_t{1} << control;
    const std::size_t tbit = std::size_t{1} << target;
    for (std::size_t i = 0; i < dim; ++i) {
        if ((i & cbit) && !(i & tbit)) {
            const std::size_t j = i | tbit;
            std::swap(state.amplitudes[static_cast<Eigen::Index>(i)],
                      state.amplitudes[static_cast<Eigen::Index>(j)]);
        }
    }
}

} // namespace

StateVector StateVector::zero(int n_qubits) {
    if (n_qubits <= 0) throw ValidationError("state needs at least one qubit");
    StateVector state;
    state.n_qubits = n_qubits;
    state.amplitudes = Eigen::VectorXcd::Zero(Eigen::Index{1} << n_qubits);
    state.amplitudes[0] = 1.0;
    return state;
}

void apply_gate(StateVector& state, const Gate& gate) {
    for (int q : gate.targets) {
        if (q < 0 || q >= state.n_qubits) {
            throw ValidationError("gate target out of range");
        }
    }
    const double t = gate.angle;
    const double c = std::cos(t / 2.0);
    const double s = std::sin(t / 2.0);
    constexpr cd i1{0.0, 1.0};
    switch (gate.kind) {
        case GateKind::H: {
            const double r = 1.0 / std::sqrt(2.0);
            apply_1q(state, gate.targets[0], r, r, r, -r);
            break;
        }
        case GateKind::RX:
            apply_1q(state, gate.targets[0], c, -i1 * s, -i1 * s, c);
            break;
        case GateKind::RY:
            apply_1q(state, gate.targets[0], c, -s, s, c);
            break;
        case GateKind::RZ:
            apply_1q(state, gate.targets[0], std::polar(1.0, -t / 2.0), 0.0, 0.0,
                     std::polar(1.0, t / 2.0));
            break;
        case GateKind::RZZ:
            apply_rzz(state, gate.targets[0], gate.targets[1], t);
            break;
        case GateKind::CZ:
            apply_cz(state, gate.targets[0], gate.targets[1]);
            break;
        case GateKind::CNOT:
            apply_cnot(state, gate.targets[0], gate.targets[1]);
            break;
    }
}

StateVector run_statevector(const Circuit& circuit, int qubit_cap) {
    if (circuit.n_qubits <= 0) throw ValidationError("circuit needs at least one qubit");
    if (circuit.n_qubits > qubit_cap) {
        throw CapacityError("circuit width " + std::to_string(circuit.n_qubits) +
                            " exceeds simulator cap of " + std::to_string(qubit_cap) + " qubits");
    }
    StateVector state = StateVector::zero(circuit.n_qubits);
    for (const Gate& gate : circuit.gates) apply_gate(state, gate);
    return state;
}

Eigen::MatrixXcd gate_matrix(const Gate& gate, int n_qubits) {
    const Eigen::Index dim = Eigen::Index{1} << n_qubits;
    Eigen::MatrixXcd u(dim, dim);
    // Build columns by applying the gate to each basis vector.
    for (Eigen::Index col = 0; col < dim; ++col) {
        StateVector state;
        state.n_qubits = n_qubits;
        state.amplitudes = Eigen::VectorXcd::Zero(dim);
        state.amplitudes[col] = 1.0;
        apply_gate(state, gate);
        u.col(col) = state.amplitudes;
    }
    return u;
}

Eigen::MatrixXcd circuit_matrix(const Circuit& circuit) {
    const Eigen::Index dim = Eigen::Index{1} << circuit.n_qubits;
    Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(dim, dim);
    for (const Gate& gate : circuit.gates) {
        u = gate_matrix(gate, circuit.n_qubits) * u;
    }
    return u;
}

} // namespace qaccel
