#pragma once

#include <memory>
#include <string>
#include <vector>

#include "qaccel/sampling.hpp"

namespace qaccel {

// Interchangeable circuit executor. The seed fully determines the result on
// every backend kind; simulate-based backends never touch the wall clock.
class ExecutionBackend {
public:
    virtual ~ExecutionBackend() = default;
    virtual std::string name() const = 0;
    virtual ShotCounts run(const Circuit& circuit, int shots, std::uint64_t seed) = 0;
};

class SimulatorIdeal final : public ExecutionBackend {
public:
    explicit SimulatorIdeal(int qubit_cap = kDefaultQubitCap) : qubit_cap_(qubit_cap) {}
    std::string name() const override { return "simulator_ideal"; }
    ShotCounts run(const Circuit& circuit, int shots, std::uint64_t seed) override;

private:
    int qubit_cap_;
};

// Stochastic Pauli-error trajectories; with per_gate_error = 0 this is
// bit-exact equal to SimulatorIdeal for the same seed (the call seed
// replaces the noise model's own rng_seed).
class SimulatorNoisy final : public ExecutionBackend {
public:
    explicit SimulatorNoisy(NoiseModel noise, int qubit_cap = kDefaultQubitCap)
        : noise_(noise), qubit_cap_(qubit_cap) {}
    std::string name() const override { return "simulator_noisy"; }
    ShotCounts run(const Circuit& circuit, int shots, std::uint64_t seed) override;

private:
    NoiseModel noise_;
    int qubit_cap_;
};

// Operational model of a queued, batched remote accelerator.
// Distributions: queue wait log-uniform on [queue_min_s, queue_max_s]
// (exclusive subscriptions skip the queue entirely); QPU seconds per full
// batch uniform on [qpu_min_s, qpu_max_s], scaled by the fill fraction for
// partial batches; a constant network overhead per call.
struct LatencyModel {
    int batch_size = 75;
    int shots_per_circuit = 1000;
    double queue_min_s = 5.0;
    double queue_max_s = 3600.0;
    double qpu_min_s = 88.0;
    double qpu_max_s = 90.0;
    double network_per_call_s = 0.5;
    bool exclusive_subscription = false;
    std::uint64_t seed = 0;

    // Mean QPU seconds per batch spread over batch_size x shots circuits
    // executions, in milliseconds (~1.19 ms with defaults).
    double per_circuit_run_ms() const;
};

// ceil(n_circuits / batch_size).
int batch_circuits(int n_circuits, int batch_size);

// Virtual-clock ledger of one remote run. All *_s components are simulated
// seconds (never slept); wall fields are filled by the benchmark layer.
struct TimingRecord {
    double queue_total_s = 0.0;
    double qpu_total_s = 0.0;
    double network_total_s = 0.0;
    int batch_count = 0;
    int circuit_count = 0;

    double simulated_total_s() const { return queue_total_s + qpu_total_s + network_total_s; }
};

// Draws the queue/QPU/network timeline of a remote run without executing
// any circuits; simulate_remote_execution uses exactly these draws.
TimingRecord draw_remote_timing(int n_circuits, const LatencyModel& lm);

// Runs every circuit through the noisy simulator while advancing a virtual
// clock per batch. Per-circuit noise streams derive from nm.rng_seed and the
// circuit's index, so results are independent of batching.
std::pair<std::vector<ShotCounts>, TimingRecord> simulate_remote_execution(
    const std::vector<Circuit>& circuits, const LatencyModel& lm, const NoiseModel& nm);

// Same operational model exposed as a backend: each run() call is one
// single-circuit submission; the virtual clock accumulates across calls.
class RemoteQpuMock final : public ExecutionBackend {
public:
    RemoteQpuMock(LatencyModel lm, NoiseModel nm) : lm_(lm), nm_(nm) {}
    std::string name() const override { return "remote_qpu_mock"; }
    ShotCounts run(const Circuit& circuit, int shots, std::uint64_t seed) override;

    const TimingRecord& timing() const { return timing_; }
    double virtual_seconds() const { return timing_.simulated_total_s(); }

private:
    LatencyModel lm_;
    NoiseModel nm_;
    TimingRecord timing_;
    int calls_ = 0;
};

// True iff a single classification completes strictly inside the update
// loop period.
bool update_loop_check(double classify_latency_s, double loop_period_s = 60.0);

} // namespace qaccel
