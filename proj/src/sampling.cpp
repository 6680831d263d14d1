#include "qaccel/sampling.hpp"

#include <vector>

namespace qaccel {

namespace {

// Distinct stream tags keep measurement draws and noise draws independent,
// which is what makes the p=0 noisy path bit-exact against the ideal path.
constexpr std::uint64_t kMeasStream = 0x6d656173; // "meas"
constexpr std::uint64_t kNoiseStream = 0x6e6f6973; // "nois"

std::size_t draw_outcome(const StateVector& state, Rng& rng) {
    const double u = rng.u01();
    const Eigen::Index dim = state.amplitudes.size();
    double acc = 0.0;
    for (Eigen::Index i = 0; i < dim; ++i) {
        acc += std::norm(state.amplitudes[i]);
        if (u < acc) return static_cast<std::size_t>(i);
    }
    return static_cast<std::size_t>(dim - 1); // guards against rounding shortfall
}

void apply_pauli(StateVector& state, PauliKind kind, int qubit) {
    // Exact Pauli action (not the half-angle rotation) so phases stay exact.
    const std::size_t dim = state.dim();
    const std::size_t bit = std::size_t{1} << qubit;
    const std::complex<double> i1{0.0, 1.0};
    switch (kind) {
        case PauliKind::X:
            for (std::size_t i = 0; i < dim; ++i) {
                if (i & bit) continue;
                std::swap(state.amplitudes[static_cast<Eigen::Index>(i)],
                          state.amplitudes[static_cast<Eigen::Index>(i | bit)]);
            }
            break;
        case PauliKind::Y:
            for (std::size_t i = 0; i < dim; ++i) {
                if (i & bit) continue;
                const std::size_t j = i | bit;
                const auto a0 = state.amplitudes[static_cast<Eigen::Index>(i)];
                const auto a1 = state.amplitudes[static_cast<Eigen::Index>(j)];
                state.amplitudes[static_cast<Eigen::Index>(i)] = -i1 * a1;
                state.amplitudes[static_cast<Eigen::Index>(j)] = i1 * a0;
            }
            break;
        case PauliKind::Z:
            for (std::size_t i = 0; i < dim; ++i) {
                if (i & bit) state.amplitudes[static_cast<Eigen::Index>(i)] *= -1.0;
            }
            break;
    }
}

struct Injection {
    std::size_t gate_index;
    int qubit;
    PauliKind pauli;
};

// Pre-draws the full error pattern of one trajectory from the shot's noise
// stream. Most low-p trajectories come back empty, letting the caller reuse
// the cached ideal state instead of re-running the circuit.
std::vector<Injection> draw_injections(const Circuit& circuit, const NoiseModel& noise, Rng& rng) {
    std::vector<Injection> out;
    for (std::size_t g = 0; g < circuit.gates.size(); ++g) {
        for (int q : circuit.gates[g].targets) {
            if (!rng.bernoulli(noise.per_gate_error)) continue;
            PauliKind pauli = noise.forced_pauli
                                  ? *noise.forced_pauli
                                  : static_cast<PauliKind>(rng.below(3));
            out.push_back({g, q, pauli});
        }
    }
    return out;
}

} // namespace

std::string outcome_bits(std::size_t index, int n_qubits) {
    std::string s(static_cast<std::size_t>(n_qubits), '0');
    for (int k = 0; k < n_qubits; ++k) {
        if (index & (std::size_t{1} << k)) s[static_cast<std::size_t>(k)] = '1';
    }
    return s;
}

ShotCounts sample_shots(const StateVector& state, int shots, std::uint64_t seed) {
    if (shots < 1) throw ValidationError("shots must be >= 1");
    ShotCounts result;
    result.total_shots = shots;
    for (int shot = 0; shot < shots; ++shot) {
        Rng rng(mix_seed(seed, static_cast<std::uint64_t>(shot), kMeasStream));
        const std::size_t idx = draw_outcome(state, rng);
        ++result.counts[outcome_bits(idx, state.n_qubits)];
    }
    return result;
}

ShotCounts run_noisy(const Circuit& circuit, const NoiseModel& noise, int shots, int qubit_cap) {
    if (shots < 1) throw ValidationError("shots must be >= 1");
    if (noise.per_gate_error < 0.0 || noise.per_gate_error > 1.0) {
        throw ValidationError("per_gate_error must lie in [0, 1]");
    }
    const StateVector ideal = run_statevector(circuit, qubit_cap);
    ShotCounts result;
    result.total_shots = shots;
    StateVector work;
    for (int shot = 0; shot < shots; ++shot) {
        Rng noise_rng(mix_seed(noise.rng_seed, static_cast<std::uint64_t>(shot), kNoiseStream));
        std::vector<Injection> injections;
        if (noise.per_gate_error > 0.0) {
            injections = draw_injections(circuit, noise, noise_rng);
        }
        const StateVector* final_state = &ideal;
        if (!injections.empty()) {
            work = StateVector::zero(circuit.n_qubits);
            std::size_t next = 0;
            for (std::size_t g = 0; g < circuit.gates.size(); ++g) {
                apply_gate(work, circuit.gates[g]);
                while (next < injections.size() && injections[next].gate_index == g) {
                    apply_pauli(work, injections[next].pauli, injections[next].qubit);
                    ++next;
                }
            }
            final_state = &work;
        }
        Rng meas_rng(mix_seed(noise.rng_seed, static_cast<std::uint64_t>(shot), kMeasStream));
        const std::size_t idx = draw_outcome(*final_state, meas_rng);
        ++result.counts[outcome_bits(idx, circuit.n_qubits)];
    }
    return result;
}

} // namespace qaccel
