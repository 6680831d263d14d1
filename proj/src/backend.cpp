#include "qaccel/backend.hpp"

#include <cmath>

namespace qaccel {

namespace {

constexpr std::uint64_t kQueueStream = 0x71756575;   // "queu"
constexpr std::uint64_t kQpuStream = 0x71707574;     // "qput"

void validate_latency(const LatencyModel& lm) {
    if (lm.batch_size < 1) throw ValidationError("batch_size must be >= 1");
    if (lm.shots_per_circuit < 1) throw ValidationError("shots_per_circuit must be >= 1");
    if (lm.queue_min_s <= 0.0 || lm.queue_max_s < lm.queue_min_s) {
        throw ValidationError("queue wait bounds invalid");
    }
    if (lm.qpu_min_s <= 0.0 || lm.qpu_max_s < lm.qpu_min_s) {
        throw ValidationError("QPU time bounds invalid");
    }
    if (lm.network_per_call_s < 0.0) throw ValidationError("network overhead must be >= 0");
}

// One batch's timing draws; batch index keys the streams so draws are
// order-independent.
void draw_batch(const LatencyModel& lm, int batch_index, int circuits_in_batch,
                TimingRecord& rec) {
    if (lm.exclusive_subscription) {
        // No queue contention; submission goes straight to the device.
    } else {
        Rng rng(mix_seed(lm.seed, kQueueStream, static_cast<std::uint64_t>(batch_index)));
        rec.queue_total_s +=
            std::exp(rng.uniform(std::log(lm.queue_min_s), std::log(lm.queue_max_s)));
    }
    Rng rng(mix_seed(lm.seed, kQpuStream, static_cast<std::uint64_t>(batch_index)));
    const double full_batch = rng.uniform(lm.qpu_min_s, lm.qpu_max_s);
    const double fill = static_cast<double>(circuits_in_batch) / static_cast<double>(lm.batch_size);
    rec.qpu_total_s += full_batch * fill;
    rec.network_total_s += lm.network_per_call_s;
}

} // namespace

ShotCounts SimulatorIdeal::run(const Circuit& circuit, int shots, std::uint64_t seed) {
    return sample_shots(run_statevector(circuit, qubit_cap_), shots, seed);
}

ShotCounts SimulatorNoisy::run(const Circuit& circuit, int shots, std::uint64_t seed) {
    NoiseModel noise = noise_;
    noise.rng_seed = seed;
    return run_noisy(circuit, noise, shots, qubit_cap_);
}

double LatencyModel::per_circuit_run_ms() const {
    const double mean_batch_s = 0.5 * (qpu_min_s + qpu_max_s);
    return 1000.0 * mean_batch_s /
           (static_cast<double>(batch_size) * static_cast<double>(shots_per_circuit));
}

int batch_circuits(int n_circuits, int batch_size) {
    if (n_circuits < 1 || batch_size < 1) {
        throw ValidationError("circuit and batch counts must be >= 1");
    }
    return (n_circuits + batch_size - 1) / batch_size;
}

TimingRecord draw_remote_timing(int n_circuits, const LatencyModel& lm) {
    validate_latency(lm);
    TimingRecord rec;
    rec.circuit_count = n_circuits;
    rec.batch_count = batch_circuits(n_circuits, lm.batch_size);
    for (int b = 0; b < rec.batch_count; ++b) {
        const int in_batch = std::min(lm.batch_size, n_circuits - b * lm.batch_size);
        draw_batch(lm, b, in_batch, rec);
    }
    return rec;
}

std::pair<std::vector<ShotCounts>, TimingRecord> simulate_remote_execution(
    const std::vector<Circuit>& circuits, const LatencyModel& lm, const NoiseModel& nm) {
    if (circuits.empty()) throw ValidationError("remote execution needs at least one circuit");
    const TimingRecord rec = draw_remote_timing(static_cast<int>(circuits.size()), lm);
    std::vector<ShotCounts> results;
    results.reserve(circuits.size());
    for (std::size_t c = 0; c < circuits.size(); ++c) {
        NoiseModel noise = nm;
        noise.rng_seed = mix_seed(nm.rng_seed, kItemStream, static_cast<std::uint64_t>(c));
        results.push_back(run_noisy(circuits[c], noise, lm.shots_per_circuit));
    }
    return {std::move(results), rec};
}

ShotCounts RemoteQpuMock::run(const Circuit& circuit, int shots, std::uint64_t seed) {
    validate_latency(lm_);
    timing_.circuit_count += 1;
    timing_.batch_count += 1;
    draw_batch(lm_, calls_++, 1, timing_);
    NoiseModel noise = nm_;
    noise.rng_seed = seed;
    return run_noisy(circuit, noise, shots);
}

bool update_loop_check(double classify_latency_s, double loop_period_s) {
    if (classify_latency_s <= 0.0 || loop_period_s <= 0.0) {
        throw ValidationError("latencies must be positive");
    }
    return classify_latency_s < loop_period_s;
}

} // namespace qaccel
