#pragma once

#include <string>
#include <vector>

#include "qaccel/common.hpp"

namespace qaccel {

// Gate set of the simulator. Conventions (see statevector.cpp for the
// matrix entries):
//   RX(t) = exp(-i t X / 2), RY(t) = exp(-i t Y / 2), RZ(t) = exp(-i t Z / 2)
//   RZZ(phi) = exp(+i phi Z(x)Z)   -- note the plus sign, no 1/2 factor
//   CZ is symmetric in its targets; CNOT is (control, target).
enum class GateKind { H, RX, RY, RZ, RZZ, CZ, CNOT };

const char* to_string(GateKind kind);
GateKind gate_kind_from_string(const std::string& name);

struct Gate {
    GateKind kind = GateKind::H;
    std::vector<int> targets;
    double angle = 0.0;

    static Gate h(int q) { return {GateKind::H, {q}, 0.0}; }
    static Gate rx(int q, double angle) { return {GateKind::RX, {q}, angle}; }
    static Gate ry(int q, double angle) { return {GateKind::RY, {q}, angle}; }
    static Gate rz(int q, double angle) { return {GateKind::RZ, {q}, angle}; }
    static Gate rzz(int a, int b, double angle) { return {GateKind::RZZ, {a, b}, angle}; }
    static Gate cz(int a, int b) { return {GateKind::CZ, {a, b}, 0.0}; }
    static Gate cnot(int control, int target) { return {GateKind::CNOT, {control, target}, 0.0}; }

    int arity() const { return (kind == GateKind::RZZ || kind == GateKind::CZ || kind == GateKind::CNOT) ? 2 : 1; }
    bool takes_angle() const {
        return kind == GateKind::RX || kind == GateKind::RY || kind == GateKind::RZ || kind == GateKind::RZZ;
    }

    bool operator==(const Gate& other) const = default;
};

struct Circuit {
    int n_qubits = 0;
    std::vector<Gate> gates;

    Circuit() = default;
    explicit Circuit(int n) : n_qubits(n) {}

    // Validates arity, qubit bounds and target distinctness before appending.
    void push(const Gate& gate);
    void append(const Circuit& other);

    std::size_t size() const { return gates.size(); }

    bool operator==(const Circuit& other) const = default;
};

// JSON schema: {"n_qubits": int, "gates": [{"kind": str, "targets": [int...], "angle": double}...]}
std::string circuit_to_json(const Circuit& circuit);
Circuit circuit_from_json(const std::string& text);

} // namespace qaccel
