#include "qaccel/benchmark.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include <json.hpp>

#include "qaccel/fisher.hpp"

namespace qaccel {

namespace {

constexpr std::uint64_t kDataStream = 0x64617461;    // "data"
constexpr std::uint64_t kSplitStream = 0x73706c74;   // "splt"
constexpr std::uint64_t kTrainStream = 0x7472696e;   // "trin"
constexpr std::uint64_t kValStream = 0x76616c64;     // "vald"
constexpr std::uint64_t kLatencyStream = 0x6c617463; // "latc"
constexpr std::uint64_t kQuboStream = 0x7175626f;    // "qubo"

class WallTimer {
public:
    explicit WallTimer(bool enabled) : enabled_(enabled) {
        if (enabled_) start_ = std::chrono::steady_clock::now();
    }
    double seconds() const {
        if (!enabled_) return 0.0;
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    bool enabled_;
    std::chrono::steady_clock::time_point start_;
};

struct RepOutcome {
    double train_s = 0.0;
    double validate_s = 0.0;
    double accuracy = 0.0;
};

struct MethodAccumulator {
    std::vector<RepOutcome> reps;
};

// Everything one repetition shares across methods.
struct RepContext {
    Dataset train;
    Dataset test;
    Dataset validation;
    std::uint64_t train_seed = 0;
    std::uint64_t val_seed = 0;
    std::uint64_t latency_seed = 0;
    std::uint64_t qubo_seed = 0;
    // VQC training is identical for the simulator and remote rows (training
    // always happens on the ideal simulator), so it runs once per rep.
    bool vqc_trained = false;
    VqcModel vqc_model;
    double vqc_train_s = 0.0;
};

void train_vqc_once(RepContext& ctx, const BenchmarkConfig& cfg) {
    if (ctx.vqc_trained) return;
    const Dataset sub =
        stratified_subsample(ctx.train, cfg.vqc_subsample, mix_seed(ctx.train_seed, 1));
    FeatureMapSpec fm;
    fm.n_features = cfg.k_features;
    fm.repetitions = cfg.feature_map_reps;
    AnsatzSpec ansatz;
    ansatz.n_qubits = cfg.k_features;
    ansatz.layers = cfg.vqc_layers;
    ansatz.entangler = cfg.vqc_entangler;
    TrainConfig tc = cfg.vqc_train;
    tc.seed = ctx.train_seed;
    SimulatorIdeal backend;
    WallTimer timer(cfg.measure_wall_time);
    ctx.vqc_model = train(sub, fm, ansatz, tc, backend);
    ctx.vqc_train_s = timer.seconds();
    ctx.vqc_trained = true;
}

RepOutcome run_classical_svm(RepContext& ctx, const BenchmarkConfig& cfg) {
    RepOutcome out;
    const Dataset sub =
        stratified_subsample(ctx.train, cfg.svm_subsample, mix_seed(ctx.train_seed, 2));
    WallTimer t_train(cfg.measure_wall_time);
    const SvmModel model = fit_svm(sub, cfg.svm_kernel, cfg.svm_C);
    out.train_s = t_train.seconds();
    WallTimer t_val(cfg.measure_wall_time);
    out.accuracy = accuracy(model, ctx.validation);
    out.validate_s = t_val.seconds();
    return out;
}

RepOutcome run_vqc_simulator(RepContext& ctx, const BenchmarkConfig& cfg) {
    train_vqc_once(ctx, cfg);
    RepOutcome out;
    out.train_s = ctx.vqc_train_s;
    SimulatorIdeal backend;
    WallTimer t_val(cfg.measure_wall_time);
    const PredictBatchResult pred =
        predict_batch(ctx.validation, ctx.vqc_model, backend, ctx.val_seed);
    out.validate_s = t_val.seconds();
    if (pred.failure_index) {
        throw std::runtime_error("validation failed at sample " +
                                 std::to_string(*pred.failure_index) + ": " +
                                 pred.failure_message);
    }
    out.accuracy = pred.accuracy.value_or(0.0);
    return out;
}

RepOutcome run_vqc_remote_mock(RepContext& ctx, const BenchmarkConfig& cfg) {
    train_vqc_once(ctx, cfg);
    RepOutcome out;
    out.train_s = ctx.vqc_train_s;

    std::vector<Circuit> circuits;
    circuits.reserve(static_cast<std::size_t>(ctx.validation.n_samples()));
    for (int i = 0; i < ctx.validation.n_samples(); ++i) {
        circuits.push_back(build_model_circuit(ctx.validation.features.row(i), ctx.vqc_model));
    }
    LatencyModel lm = cfg.latency;
    lm.seed = ctx.latency_seed;
    lm.shots_per_circuit = ctx.vqc_model.shots;
    NoiseModel nm;
    nm.per_gate_error = cfg.noise_p;
    nm.rng_seed = ctx.val_seed;
    const auto [counts, timing] = simulate_remote_execution(circuits, lm, nm);

    int hits = 0;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        const int label = parity_fraction(counts[i]) > 0.5 ? 1 : 0;
        hits += label == ctx.validation.labels[static_cast<Eigen::Index>(i)];
    }
    out.accuracy = static_cast<double>(hits) / static_cast<double>(counts.size());
    // The remote clock is virtual and seed-deterministic, so it is reported
    // regardless of wall-time measurement.
    out.validate_s = timing.simulated_total_s();
    return out;
}

RepOutcome run_qubo_svm(RepContext& ctx, const BenchmarkConfig& cfg) {
    // The QUBO dimension is n * precision_bits, so the dual is solved on a
    // small balanced subset of the training data.
    const Dataset sub = stratified_subsample(ctx.train, cfg.qubo_subsample, ctx.qubo_seed);

    QuboEncoding enc;
    enc.n_samples = sub.n_samples();
    enc.precision_bits = cfg.qubo_precision_bits;
    enc.penalty = cfg.qubo_penalty;
    AnnealSchedule sched = cfg.anneal;
    sched.seed = mix_seed(ctx.qubo_seed, 1);

    RepOutcome out;
    WallTimer t_train(cfg.measure_wall_time);
    const QuboMatrix q = build_qubo(sub, cfg.svm_kernel, enc);
    const QuboSolution sol = solve_annealing(q, sched);
    const SvmModel model = decode_model(sol.bits, enc, sub, cfg.svm_kernel);
    out.train_s = t_train.seconds();
    WallTimer t_val(cfg.measure_wall_time);
    out.accuracy = accuracy(model, ctx.validation);
    out.validate_s = t_val.seconds();
    return out;
}

void fill_row_stats(BenchmarkRow& row, const std::vector<RepOutcome>& reps) {
    row.runs = static_cast<int>(reps.size());
    auto stats = [&](auto get, double& mean, double& spread) {
        double sum = 0.0;
        double lo = get(reps[0]);
        double hi = lo;
        for (const RepOutcome& r : reps) {
            const double v = get(r);
            sum += v;
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        mean = sum / static_cast<double>(reps.size());
        spread = (hi - lo) / 2.0; // half-range
    };
    stats([](const RepOutcome& r) { return r.train_s; }, row.train_time_s, row.train_spread_s);
    stats([](const RepOutcome& r) { return r.validate_s; }, row.validate_time_s,
          row.validate_spread_s);
    stats([](const RepOutcome& r) { return r.accuracy; }, row.accuracy, row.accuracy_spread);
}

} // namespace

const char* to_string(MethodKind kind) {
    switch (kind) {
        case MethodKind::ClassicalSvm: return "classical_svm";
        case MethodKind::VqcSimulator: return "vqc_simulator";
        case MethodKind::VqcRemoteMock: return "vqc_remote_mock";
        case MethodKind::QuboSvm: return "qubo_svm";
    }
    throw ValidationError("unknown method kind");
}

MethodKind method_from_string(const std::string& name) {
    if (name == "classical_svm") return MethodKind::ClassicalSvm;
    if (name == "vqc_simulator") return MethodKind::VqcSimulator;
    if (name == "vqc_remote_mock") return MethodKind::VqcRemoteMock;
    if (name == "qubo_svm") return MethodKind::QuboSvm;
    throw ValidationError("unknown benchmark method: " + name);
}

BenchmarkReport run_benchmark(const BenchmarkConfig& cfg) {
    if (cfg.methods.empty()) throw ValidationError("benchmark needs at least one method");
    if (cfg.repetitions < 1) throw ValidationError("repetitions must be >= 1");
    if (cfg.k_features < 1) throw ValidationError("k_features must be >= 1");
    if (!(cfg.input_gain > 0.0) || cfg.input_gain > 1.0) {
        throw ValidationError("input_gain must be in (0, 1]");
    }

    // A CSV-backed dataset is fixed across repetitions; synthetic data is
    // regenerated per repetition so spreads reflect independent draws.
    Dataset csv_data;
    const bool from_csv = !cfg.dataset_csv.empty();
    if (from_csv) csv_data = preprocess(ingest_csv(cfg.dataset_csv));

    std::vector<MethodAccumulator> acc(cfg.methods.size());
    for (int rep = 0; rep < cfg.repetitions; ++rep) {
        const std::uint64_t r = static_cast<std::uint64_t>(rep);
        Dataset data;
        if (from_csv) {
            data = csv_data;
        } else {
            SyntheticConfig synth = cfg.synthetic;
            synth.seed = mix_seed(cfg.seed, kDataStream, r);
            data = preprocess(generate_synthetic(synth));
        }
        SplitSpec split_spec = cfg.split;
        split_spec.seed = mix_seed(cfg.seed, kSplitStream, r);
        SplitResult split = split_by_drive(data, split_spec);

        const Scaler scaler = Scaler::fit(split.train);
        Dataset train_scaled = scaler.transform(split.train);
        Dataset validation_scaled = scaler.transform(split.validation);
        Dataset test_scaled = scaler.transform(split.test);

        const FeatureRanking ranking = fisher_score(train_scaled);
        const std::vector<int> top = select_top_k(ranking, cfg.k_features);

        RepContext ctx;
        ctx.train = select_columns(train_scaled, top);
        ctx.test = select_columns(test_scaled, top);
        ctx.validation = select_columns(validation_scaled, top);
        ctx.train.features *= cfg.input_gain;
        ctx.test.features *= cfg.input_gain;
        ctx.validation.features *= cfg.input_gain;
        ctx.train_seed = mix_seed(cfg.seed, kTrainStream, r);
        ctx.val_seed = mix_seed(cfg.seed, kValStream, r);
        ctx.latency_seed = mix_seed(cfg.seed, kLatencyStream, r);
        ctx.qubo_seed = mix_seed(cfg.seed, kQuboStream, r);

        for (std::size_t m = 0; m < cfg.methods.size(); ++m) {
            RepOutcome out;
            switch (cfg.methods[m]) {
                case MethodKind::ClassicalSvm: out = run_classical_svm(ctx, cfg); break;
                case MethodKind::VqcSimulator: out = run_vqc_simulator(ctx, cfg); break;
                case MethodKind::VqcRemoteMock: out = run_vqc_remote_mock(ctx, cfg); break;
                case MethodKind::QuboSvm: out = run_qubo_svm(ctx, cfg); break;
            }
            acc[m].reps.push_back(out);
        }
    }

    BenchmarkReport report;
    for (std::size_t m = 0; m < cfg.methods.size(); ++m) {
        BenchmarkRow row;
        row.method = to_string(cfg.methods[m]);
        switch (cfg.methods[m]) {
            case MethodKind::ClassicalSvm:
                row.kernel = to_string(cfg.svm_kernel.kind);
                row.train_hardware = "classical_cpu";
                row.validate_hardware = "classical_cpu";
                break;
            case MethodKind::VqcSimulator:
                row.kernel = "zz_feature_map";
                row.train_hardware = "simulator_ideal";
                row.validate_hardware = "simulator_ideal";
                break;
            case MethodKind::VqcRemoteMock:
                row.kernel = "zz_feature_map";
                row.train_hardware = "simulator_ideal";
                row.validate_hardware = "remote_qpu_mock";
                break;
            case MethodKind::QuboSvm:
                row.kernel = to_string(cfg.svm_kernel.kind);
                row.train_hardware = "sim_annealer";
                row.validate_hardware = "classical_cpu";
                break;
        }
        fill_row_stats(row, acc[m].reps);
        report.rows.push_back(std::move(row));
    }
    return report;
}

ReportFormat report_format_from_string(const std::string& name) {
    if (name == "markdown") return ReportFormat::Markdown;
    if (name == "csv") return ReportFormat::Csv;
    if (name == "json") return ReportFormat::Json;
    throw ValidationError("unknown report format: " + name);
}

namespace {

std::string format_scaled(double value, double spread, const char* unit) {
    const bool fine = value < 10.0;
    char buf[64];
    std::string out;
    std::snprintf(buf, sizeof(buf), fine ? "%.1f" : "%.0f", value);
    out = buf;
    if (spread != 0.0) {
        std::snprintf(buf, sizeof(buf), fine ? " ±%.1f" : " ±%.0f", spread);
        out += buf;
    }
    out += ' ';
    out += unit;
    return out;
}

} // namespace

std::string format_duration(double seconds, double spread_seconds) {
    if (seconds < 1.0) return format_scaled(seconds * 1000.0, spread_seconds * 1000.0, "ms");
    if (seconds < 120.0) return format_scaled(seconds, spread_seconds, "s");
    return format_scaled(seconds / 60.0, spread_seconds / 60.0, "m");
}

std::string format_accuracy(double fraction, double spread) {
    char buf[64];
    std::string out;
    std::snprintf(buf, sizeof(buf), "%.1f", fraction * 100.0);
    out = buf;
    if (spread != 0.0) {
        std::snprintf(buf, sizeof(buf), " ±%.1f", spread * 100.0);
        out += buf;
    }
    out += '%';
    return out;
}

std::string emit_report(const BenchmarkReport& report, ReportFormat format) {
    if (report.rows.empty()) throw ValidationError("report has no rows");
    std::string out;
    switch (format) {
        case ReportFormat::Markdown: {
            out += "| Method | Kernel | Train Hardware | Train Time | Validate Hardware | "
                   "Validate Time | Accuracy |\n";
            out += "|---|---|---|---|---|---|---|\n";
            for (const BenchmarkRow& r : report.rows) {
                out += "| " + r.method + " | " + r.kernel + " | " + r.train_hardware + " | " +
                       format_duration(r.train_time_s, r.train_spread_s) + " | " +
                       r.validate_hardware + " | " +
                       format_duration(r.validate_time_s, r.validate_spread_s) + " | " +
                       format_accuracy(r.accuracy, r.accuracy_spread) + " |\n";
            }
            break;
        }
        case ReportFormat::Csv: {
            out += "method,kernel,train_hardware,train_time,validate_hardware,validate_time,"
                   "accuracy\n";
            for (const BenchmarkRow& r : report.rows) {
                out += r.method + ',' + r.kernel + ',' + r.train_hardware + ',' +
                       format_duration(r.train_time_s, r.train_spread_s) + ',' +
                       r.validate_hardware + ',' +
                       format_duration(r.validate_time_s, r.validate_spread_s) + ',' +
                       format_accuracy(r.accuracy, r.accuracy_spread) + '\n';
            }
            break;
        }
        case ReportFormat::Json: {
            nlohmann::json j;
            j["rows"] = nlohmann::json::array();
            for (const BenchmarkRow& r : report.rows) {
                j["rows"].push_back({{"method", r.method},
                                     {"kernel", r.kernel},
                                     {"train_hardware", r.train_hardware},
                                     {"validate_hardware", r.validate_hardware},
                                     {"train_time_s", r.train_time_s},
                                     {"train_spread_s", r.train_spread_s},
                                     {"validate_time_s", r.validate_time_s},
                                     {"validate_spread_s", r.validate_spread_s},
                                     {"accuracy", r.accuracy},
                                     {"accuracy_spread", r.accuracy_spread},
                                     {"runs", r.runs}});
            }
            out = j.dump(2);
            out += '\n';
            break;
        }
    }
    return out;
}

BenchmarkReport report_from_json(const std::string& text) {
    try {
        const nlohmann::json j = nlohmann::json::parse(text);
        BenchmarkReport report;
        for (const auto& jr : j.at("rows")) {
            BenchmarkRow r;
            r.method = jr.at("method").get<std::string>();
            r.kernel = jr.at("kernel").get<std::string>();
            r.train_hardware = jr.at("train_hardware").get<std::string>();
            r.validate_hardware = jr.at("validate_hardware").get<std::string>();
            r.train_time_s = jr.at("train_time_s").get<double>();
            r.train_spread_s = jr.at("train_spread_s").get<double>();
            r.validate_time_s = jr.at("validate_time_s").get<double>();
            r.validate_spread_s = jr.at("validate_spread_s").get<double>();
            r.accuracy = jr.at("accuracy").get<double>();
            r.accuracy_spread = jr.at("accuracy_spread").get<double>();
            r.runs = jr.at("runs").get<int>();
            report.rows.push_back(std::move(r));
        }
        return report;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("invalid report JSON: ") + e.what());
    }
}

BenchmarkConfig benchmark_config_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError(std::string("invalid benchmark config JSON: ") + e.what());
    }
    BenchmarkConfig cfg;
    if (j.contains("methods")) {
        cfg.methods.clear();
        for (const auto& name : j.at("methods")) {
            cfg.methods.push_back(method_from_string(name.get<std::string>()));
        }
    }
    cfg.dataset_csv = j.value("dataset_csv", cfg.dataset_csv);
    cfg.seed = j.value("seed", cfg.seed);
    cfg.repetitions = j.value("repetitions", cfg.repetitions);
    cfg.k_features = j.value("k_features", cfg.k_features);
    cfg.input_gain = j.value("input_gain", cfg.input_gain);
    cfg.measure_wall_time = j.value("measure_wall_time", cfg.measure_wall_time);
    cfg.noise_p = j.value("noise_p", cfg.noise_p);
    if (j.contains("synthetic")) {
        const auto& js = j.at("synthetic");
        cfg.synthetic.n_drives = js.value("n_drives", cfg.synthetic.n_drives);
        cfg.synthetic.n_on_drives = js.value("n_on_drives", cfg.synthetic.n_on_drives);
        cfg.synthetic.n_features = js.value("n_features", cfg.synthetic.n_features);
        cfg.synthetic.n_informative = js.value("n_informative", cfg.synthetic.n_informative);
        cfg.synthetic.separation = js.value("separation", cfg.synthetic.separation);
        cfg.synthetic.min_samples_per_drive =
            js.value("min_samples_per_drive", cfg.synthetic.min_samples_per_drive);
        cfg.synthetic.max_samples_per_drive =
            js.value("max_samples_per_drive", cfg.synthetic.max_samples_per_drive);
        cfg.synthetic.state_flip_prob = js.value("state_flip_prob", cfg.synthetic.state_flip_prob);
    }
    if (j.contains("split")) {
        const auto& js = j.at("split");
        cfg.split.train = js.value("train", cfg.split.train);
        cfg.split.test = js.value("test", cfg.split.test);
        cfg.split.validation = js.value("validation", cfg.split.validation);
    }
    if (j.contains("svm")) {
        const auto& js = j.at("svm");
        if (js.contains("kernel")) {
            cfg.svm_kernel.kind = kernel_kind_from_string(js.at("kernel").get<std::string>());
        }
        if (js.contains("gamma")) {
            cfg.svm_kernel.gamma_auto = false;
            cfg.svm_kernel.gamma = js.at("gamma").get<double>();
        }
        cfg.svm_kernel.degree = js.value("degree", cfg.svm_kernel.degree);
        cfg.svm_kernel.coef0 = js.value("coef0", cfg.svm_kernel.coef0);
        cfg.svm_C = js.value("C", cfg.svm_C);
        cfg.svm_subsample = js.value("subsample", cfg.svm_subsample);
    }
    if (j.contains("vqc")) {
        const auto& js = j.at("vqc");
        cfg.vqc_train.max_iterations = js.value("iterations", cfg.vqc_train.max_iterations);
        cfg.vqc_train.shots = js.value("shots", cfg.vqc_train.shots);
        cfg.vqc_train.a = js.value("a", cfg.vqc_train.a);
        cfg.vqc_train.c = js.value("c", cfg.vqc_train.c);
        cfg.vqc_train.convergence_tolerance =
            js.value("convergence_tolerance", cfg.vqc_train.convergence_tolerance);
        cfg.vqc_train.patience = js.value("patience", cfg.vqc_train.patience);
        cfg.vqc_subsample = js.value("subsample", cfg.vqc_subsample);
        cfg.vqc_layers = js.value("layers", cfg.vqc_layers);
        if (js.contains("entangler")) {
            cfg.vqc_entangler = entangler_from_string(js.at("entangler").get<std::string>());
        }
        cfg.feature_map_reps = js.value("feature_map_reps", cfg.feature_map_reps);
    }
    if (j.contains("qubo")) {
        const auto& js = j.at("qubo");
        cfg.qubo_subsample = js.value("subsample", cfg.qubo_subsample);
        cfg.qubo_precision_bits = js.value("precision_bits", cfg.qubo_precision_bits);
        cfg.qubo_penalty = js.value("penalty", cfg.qubo_penalty);
        cfg.anneal.sweeps = js.value("sweeps", cfg.anneal.sweeps);
        cfg.anneal.restarts = js.value("restarts", cfg.anneal.restarts);
        cfg.anneal.initial_temperature =
            js.value("initial_temperature", cfg.anneal.initial_temperature);
        cfg.anneal.final_temperature =
            js.value("final_temperature", cfg.anneal.final_temperature);
    }
    if (j.contains("latency")) {
        const auto& js = j.at("latency");
        cfg.latency.batch_size = js.value("batch_size", cfg.latency.batch_size);
        cfg.latency.shots_per_circuit =
            js.value("shots_per_circuit", cfg.latency.shots_per_circuit);
        cfg.latency.queue_min_s = js.value("queue_min_s", cfg.latency.queue_min_s);
        cfg.latency.queue_max_s = js.value("queue_max_s", cfg.latency.queue_max_s);
        cfg.latency.qpu_min_s = js.value("qpu_min_s", cfg.latency.qpu_min_s);
        cfg.latency.qpu_max_s = js.value("qpu_max_s", cfg.latency.qpu_max_s);
        cfg.latency.network_per_call_s =
            js.value("network_per_call_s", cfg.latency.network_per_call_s);
        cfg.latency.exclusive_subscription =
            js.value("exclusive_subscription", cfg.latency.exclusive_subscription);
    }
    return cfg;
}

} // namespace qaccel
