#pragma once

#include "qaccel/backend.hpp"
#include "qaccel/pipeline.hpp"
#include "qaccel/qubo.hpp"
#include "qaccel/svm.hpp"
#include "qaccel/vqc.hpp"

namespace qaccel {

enum class MethodKind { ClassicalSvm, VqcSimulator, VqcRemoteMock, QuboSvm };

const char* to_string(MethodKind kind);
MethodKind method_from_string(const std::string& name);

// One full evaluation protocol: per repetition, build (or load) the dataset,
// split by drive, fit the scaler and Fisher selection on the training split
// only, then train and validate every configured method on identical
// partitions. Report rows aggregate over repetitions as mean +/- half-range.
struct BenchmarkConfig {
    std::vector<MethodKind> methods = {MethodKind::ClassicalSvm, MethodKind::VqcSimulator,
                                       MethodKind::VqcRemoteMock, MethodKind::QuboSvm};
    std::string dataset_csv; // empty -> synthetic generator
    SyntheticConfig synthetic;
    SplitSpec split;
    int repetitions = 3;
    std::uint64_t seed = 0;
    int k_features = 2;

    KernelSpec svm_kernel = KernelSpec::rbf();
    double svm_C = 1.0;
    // SMO time grows superlinearly with training rows; the RBF baseline is
    // within a point of its full-split accuracy at this size.
    int svm_subsample = 2000;

    // Gain applied to every feature after selection, shrinking inputs from
    // [0, pi] into [0, gain*pi]. The embedding applies its phases twice, so
    // data spread across the full range drives the two-body phase through
    // several turns and the parity decision surface oscillates at data
    // scale; compressing the band keeps it locally monotone. Applied
    // identically to every method so comparisons stay like-for-like.
    double input_gain = 0.5;

    TrainConfig vqc_train;
    int vqc_layers = 2;
    EntanglerKind vqc_entangler = EntanglerKind::LinearCz;
    int feature_map_reps = 2;
    // SPSA evaluates the full cost twice per iteration, so training on the
    // whole fleet-scale split costs hours; a stratified subsample this size
    // keeps the lane to seconds without measurable accuracy loss.
    int vqc_subsample = 500;

    int qubo_subsample = 20; // training subset size for the QUBO path
    int qubo_precision_bits = 2;
    double qubo_penalty = 1.0;
    AnnealSchedule anneal;

    double noise_p = 0.0; // remote-mock gate error
    LatencyModel latency;

    // When false, wall-clock fields are reported as zero so repeated runs
    // with one seed emit byte-identical reports. Virtual (simulated) remote
    // times are deterministic and always reported.
    bool measure_wall_time = true;
};

struct BenchmarkRow {
    std::string method;
    std::string kernel;
    std::string train_hardware;
    std::string validate_hardware;
    double train_time_s = 0.0;
    double train_spread_s = 0.0;
    double validate_time_s = 0.0;
    double validate_spread_s = 0.0;
    double accuracy = 0.0;
    double accuracy_spread = 0.0;
    int runs = 0;

    bool operator==(const BenchmarkRow& other) const = default;
};

struct BenchmarkReport {
    std::vector<BenchmarkRow> rows;

    bool operator==(const BenchmarkReport& other) const = default;
};

BenchmarkReport run_benchmark(const BenchmarkConfig& cfg);

enum class ReportFormat { Markdown, Csv, Json };

ReportFormat report_format_from_string(const std::string& name);

// Markdown/CSV render "value ±spread unit" cells; JSON keeps raw numbers and
// round-trips through report_from_json.
std::string emit_report(const BenchmarkReport& report, ReportFormat format);
BenchmarkReport report_from_json(const std::string& text);

// "485 ±5 ms", "1.2 s", "218 ±65 m": unit picked by magnitude (ms under a
// second, s under two minutes, minutes above), one decimal under 10 units,
// spread omitted when exactly zero.
std::string format_duration(double seconds, double spread_seconds);

// "93.2%" / "91.2 ±0.7%".
std::string format_accuracy(double fraction, double spread);

// Config file (JSON object, all keys optional). See README for the schema.
BenchmarkConfig benchmark_config_from_json(const std::string& text);

} // namespace qaccel
