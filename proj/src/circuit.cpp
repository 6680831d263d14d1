#include "qaccel/circuit.hpp"

#include <cmath>

#include <json.hpp>

namespace qaccel {

const char* to_string(GateKind kind) {
    switch (kind) {
        case GateKind::H: return "h";
        case GateKind::RX: return "rx";
        case GateKind::RY: return "ry";
        case GateKind::RZ: return "rz";
        case GateKind::RZZ: return "rzz";
        case GateKind::CZ: return "cz";
        case GateKind::CNOT: return "cnot";
    }
    throw ValidationError("unknown gate kind");
}

GateKind gate_kind_from_string(const std::string& name) {
    if (name == "h") return GateKind::H;
    if (name == "rx") return GateKind::RX;
    if (name == "ry") return GateKind::RY;
    if (name == "rz") return GateKind::RZ;
    if (name == "rzz") return GateKind::RZZ;
    if (name == "cz") return GateKind::CZ;
    if (name == "cnot") return GateKind::CNOT;
    throw ValidationError("unknown gate kind: " + name);
}

void Circuit::push(const Gate& gate) {
    if (static_cast<int>(gate.targets.size()) != gate.arity()) {
        throw ValidationError(std::string(to_string(gate.kind)) + " expects " +
                              std::to_string(gate.arity()) + " target(s), got " +
                              std::to_string(gate.targets.size()));
    }
    for (int q : gate.targets) {
        if (q < 0 || q >= n_qubits) {
            throw ValidationError("gate target " + std::to_string(q) +
                                  " out of range for " + std::to_string(n_qubits) + " qubits");
        }
    }
    if (gate.arity() == 2 && gate.targets[0] == gate.targets[1]) {
        throw ValidationError("two-qubit gate targets must be distinct");
    }
    if (gate.takes_angle() && !std::isfinite(gate.angle)) {
        throw ValidationError(std::string(to_string(gate.kind)) + " angle must be finite");
    }
    gates.push_back(gate);
}

void Circuit::append(const Circuit& other) {
    if (other.n_qubits != n_qubits) {
        throw ValidationError("cannot append circuit on " + std::to_string(other.n_qubits) +
                              " qubits to circuit on " + std::to_string(n_qubits));
    }
    for (const Gate& g : other.gates) push(g);
}

std::string circuit_to_json(const Circuit& circuit) {
    nlohmann::json j;
    j["n_qubits"] = circuit.n_qubits;
    j["gates"] = nlohmann::json::array();
    for (const Gate& g : circuit.gates) {
        nlohmann::json jg;
        jg["kind"] = to_string(g.kind);
        jg["targets"] = g.targets;
        if (g.takes_angle()) jg["angle"] = g.angle;
        j["gates"].push_back(std::move(jg));
    }
    return j.dump(2);
}

Circuit circuit_from_json(const std::string& text) {
    try {
        const nlohmann::json j = nlohmann::json::parse(text);
        if (!j.is_object() || !j.contains("n_qubits") || !j.contains("gates")) {
            throw ValidationError("circuit JSON must contain n_qubits and gates");
        }
        Circuit circuit(j.at("n_qubits").get<int>());
        if (circuit.n_qubits <= 0) throw ValidationError("n_qubits must be positive");
        for (const auto& jg : j.at("gates")) {
            Gate g;
            g.kind = gate_kind_from_string(jg.at("kind").get<std::string>());
            g.targets = jg.at("targets").get<std::vector<int>>();
            g.angle = jg.value("angle", 0.0);
            circuit.push(g);
        }
        return circuit;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("invalid circuit JSON: ") + e.what());
    }
}

} // namespace qaccel
