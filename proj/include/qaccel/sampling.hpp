#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "qaccel/statevector.hpp"

namespace qaccel {

// Measurement outcomes aggregated over shots. Keys are n-bit strings with
// qubit 0 as the LEFTMOST character ("01" = qubit 0 measured 0, qubit 1
// measured 1). std::map keeps iteration (and serialization) deterministic.
struct ShotCounts {
    std::map<std::string, int> counts;
    int total_shots = 0;

    bool operator==(const ShotCounts& other) const = default;
};

// Renders basis-state index as an outcome string (qubit k = bit k of index).
std::string outcome_bits(std::size_t index, int n_qubits);

// Draws `shots` i.i.d. samples from |amplitude|^2. Each shot uses its own
// RNG stream derived from (seed, shot_index), so results are independent of
// evaluation order and safe to parallelize.
ShotCounts sample_shots(const StateVector& state, int shots, std::uint64_t seed);

enum class PauliKind { X, Y, Z };

// Stochastic Pauli error channel: after each gate, each target qubit is hit
// with probability per_gate_error by a uniformly random Pauli (X, Y or Z).
// forced_pauli is a test hook that fixes which Pauli is injected without
// touching the injection probability.
struct NoiseModel {
    double per_gate_error = 0.0;
    std::uint64_t rng_seed = 0;
    std::optional<PauliKind> forced_pauli;
};

// Runs `shots` independent noisy trajectories of the circuit and aggregates
// terminal measurements. With per_gate_error = 0 the result is bit-exact
// equal to sample_shots(run_statevector(circuit), shots, noise.rng_seed).
ShotCounts run_noisy(const Circuit& circuit, const NoiseModel& noise, int shots,
                     int qubit_cap = kDefaultQubitCap);

} // namespace qaccel
