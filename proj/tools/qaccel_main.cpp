#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qaccel/benchmark.hpp"
#include "qaccel/fisher.hpp"

namespace {

using namespace qaccel;

// CLI-level seed streams; module-internal streams derive further from these.
constexpr std::uint64_t kDataTag = 0x64617461;    // "data"
constexpr std::uint64_t kSplitTag = 0x73706c74;   // "splt"
constexpr std::uint64_t kTrainTag = 0x7472696e;   // "trin"
constexpr std::uint64_t kPredictTag = 0x70726564; // "pred"
constexpr std::uint64_t kQuboTag = 0x7175626f;    // "qubo"
constexpr std::uint64_t kLatencyTag = 0x6c617463; // "latc"

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot read file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Primary data goes to --out when given, else to stdout; diagnostics always
// go to stderr.
void write_output(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw ValidationError("cannot write file: " + out_path);
    out << text;
}

struct Options {
    std::string config_path;
    std::string data_path;
    std::string out_path;
    std::string model_path;
    std::string method = "svm";
    std::string backend = "simulator";
    std::string format = "markdown";
    std::uint64_t seed = 0;
    int shots = 1000;
    int k = 2;
    int repetitions = 3;
    int batch = 75;
    double noise = 0.0;
    int probe_bits = 2;
    std::vector<int> probe_sizes{4, 8, 12, 16};
    bool no_wall_time = false;
    bool no_timing = false;
};

bool passed(const CLI::App* sub, const std::string& name) {
    const CLI::Option* opt = sub->get_option_no_throw(name);
    return opt != nullptr && opt->count() > 0;
}

// Config file first, explicit flags second, built-in defaults last.
BenchmarkConfig effective_config(const Options& o, const CLI::App* sub) {
    BenchmarkConfig cfg;
    if (!o.config_path.empty()) cfg = benchmark_config_from_json(read_file(o.config_path));
    if (passed(sub, "--seed")) cfg.seed = o.seed;
    if (passed(sub, "--k")) cfg.k_features = o.k;
    if (passed(sub, "--repetitions")) cfg.repetitions = o.repetitions;
    if (passed(sub, "--noise")) cfg.noise_p = o.noise;
    if (passed(sub, "--shots")) {
        cfg.vqc_train.shots = o.shots;
        cfg.latency.shots_per_circuit = o.shots;
    }
    if (passed(sub, "--batch")) cfg.latency.batch_size = o.batch;
    if (o.no_wall_time) cfg.measure_wall_time = false;
    return cfg;
}

// --data reads a drive CSV; otherwise the synthetic generator runs with the
// same seed derivation the generate verb uses, so `train --seed S` trains on
// exactly the drives `generate --seed S` emits.
Dataset load_dataset(const Options& o, const BenchmarkConfig& cfg) {
    if (!o.data_path.empty()) return preprocess(ingest_csv(o.data_path));
    SyntheticConfig synth = cfg.synthetic;
    synth.seed = mix_seed(cfg.seed, kDataTag);
    return preprocess(generate_synthetic(synth));
}

std::unique_ptr<ExecutionBackend> make_backend(const std::string& name, double noise_p,
                                               const LatencyModel& lm) {
    if (name == "simulator") return std::make_unique<SimulatorIdeal>();
    NoiseModel nm;
    nm.per_gate_error = noise_p;
    if (name == "noisy") return std::make_unique<SimulatorNoisy>(nm);
    if (name == "remote-mock") return std::make_unique<RemoteQpuMock>(lm, nm);
    throw ValidationError("unknown backend: " + name + " (simulator|noisy|remote-mock)");
}

int run_generate(const Options& o, const CLI::App* sub) {
    const BenchmarkConfig cfg = effective_config(o, sub);
    SyntheticConfig synth = cfg.synthetic;
    synth.seed = mix_seed(cfg.seed, kDataTag);
    write_output(drives_to_csv(generate_synthetic(synth)), o.out_path);
    return 0;
}

int run_select_features(const Options& o, const CLI::App* sub) {
    const BenchmarkConfig cfg = effective_config(o, sub);
    const Dataset data = load_dataset(o, cfg);
    const FeatureRanking ranking = fisher_score(data);
    std::string csv = ranking_to_csv(ranking, data.feature_names);
    if (passed(sub, "--k")) {
        select_top_k(ranking, o.k); // range check
        std::istringstream in(csv);
        std::string line;
        std::string trimmed;
        int data_lines = -1; // first line is the header
        while (std::getline(in, line) && data_lines < o.k) {
            trimmed += line;
            trimmed += '\n';
            ++data_lines;
        }
        csv = std::move(trimmed);
    }
    write_output(csv, o.out_path);
    return 0;
}

int run_train(const Options& o, const CLI::App* sub) {
    const BenchmarkConfig cfg = effective_config(o, sub);
    const Dataset data = load_dataset(o, cfg);
    SplitSpec sp = cfg.split;
    sp.seed = mix_seed(cfg.seed, kSplitTag);
    const SplitResult split = split_by_drive(data, sp);
    const Scaler scaler = Scaler::fit(split.train);
    const Dataset train_scaled = scaler.transform(split.train);
    const Dataset val_scaled = scaler.transform(split.validation);
    const std::vector<int> top = select_top_k(fisher_score(train_scaled), cfg.k_features);
    Dataset train_sel = select_columns(train_scaled, top);
    Dataset val_sel = select_columns(val_scaled, top);
    train_sel.features *= cfg.input_gain;
    val_sel.features *= cfg.input_gain;

    nlohmann::json out;
    out["method"] = o.method;
    out["selected_features"] = top;
    out["feature_names"] = train_sel.feature_names;
    out["scaler"] = nlohmann::json::parse(scaler_to_json(scaler));
    out["input_gain"] = cfg.input_gain;

    if (o.method == "svm") {
        const Dataset svm_data =
            stratified_subsample(train_sel, cfg.svm_subsample, mix_seed(cfg.seed, kTrainTag, 2));
        const SvmModel m = fit_svm(svm_data, cfg.svm_kernel, cfg.svm_C);
        out["svm"] = nlohmann::json::parse(svm_to_json(m));
        std::cerr << "train accuracy " << accuracy(m, svm_data) << ", validation accuracy "
                  << accuracy(m, val_sel) << "\n";
    } else if (o.method == "qubo") {
        const Dataset sub_data =
            stratified_subsample(train_sel, cfg.qubo_subsample, mix_seed(cfg.seed, kQuboTag));
        QuboEncoding enc;
        enc.n_samples = sub_data.n_samples();
        enc.precision_bits = cfg.qubo_precision_bits;
        enc.penalty = cfg.qubo_penalty;
        AnnealSchedule sched = cfg.anneal;
        sched.seed = mix_seed(cfg.seed, kQuboTag, 1);
        const QuboMatrix q = build_qubo(sub_data, cfg.svm_kernel, enc);
        const QuboSolution sol = solve_annealing(q, sched);
        const SvmModel m = decode_model(sol.bits, enc, sub_data, cfg.svm_kernel);
        out["svm"] = nlohmann::json::parse(svm_to_json(m));
        std::cerr << "qubo energy " << sol.energy << ", validation accuracy "
                  << accuracy(m, val_sel) << "\n";
    } else if (o.method == "vqc") {
        FeatureMapSpec fm;
        fm.n_features = cfg.k_features;
        fm.repetitions = cfg.feature_map_reps;
        AnsatzSpec ansatz;
        ansatz.n_qubits = cfg.k_features;
        ansatz.layers = cfg.vqc_layers;
        ansatz.entangler = cfg.vqc_entangler;
        TrainConfig tc = cfg.vqc_train;
        tc.seed = mix_seed(cfg.seed, kTrainTag);
        LatencyModel lm = cfg.latency;
        lm.seed = mix_seed(cfg.seed, kLatencyTag);
        const auto backend = make_backend(o.backend, cfg.noise_p, lm);
        const Dataset vqc_data =
            stratified_subsample(train_sel, cfg.vqc_subsample, mix_seed(tc.seed, 1));
        const VqcModel m = train(vqc_data, fm, ansatz, tc, *backend);
        out["vqc"] = nlohmann::json::parse(vqc_to_json(m));
        const PredictBatchResult val =
            predict_batch(val_sel, m, *backend, mix_seed(cfg.seed, kPredictTag));
        std::cerr << "final cost " << m.final_cost << ", iterations " << m.iterations
                  << ", validation accuracy " << val.accuracy.value_or(0.0) << "\n";
    } else {
        throw ValidationError("unknown method: " + o.method + " (svm|vqc|qubo)");
    }
    write_output(out.dump(2) + "\n", o.out_path);
    return 0;
}

int run_predict(const Options& o, const CLI::App* sub) {
    const BenchmarkConfig cfg = effective_config(o, sub);
    nlohmann::json mj;
    try {
        mj = nlohmann::json::parse(read_file(o.model_path));
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError(std::string("invalid model file: ") + e.what());
    }
    const std::vector<int> selected = mj.at("selected_features").get<std::vector<int>>();
    const Scaler scaler = scaler_from_json(mj.at("scaler").dump());
    const Dataset data = load_dataset(o, cfg);
    Dataset sel = select_columns(scaler.transform(data), selected);
    // Models trained before the gain field existed predate any compression.
    sel.features *= mj.value("input_gain", 1.0);

    std::string csv = "sample,label\n";
    int hits = 0;
    int n = 0;
    if (mj.contains("vqc")) {
        const VqcModel m = vqc_from_json(mj.at("vqc").dump());
        LatencyModel lm = cfg.latency;
        lm.seed = mix_seed(cfg.seed, kLatencyTag);
        lm.shots_per_circuit = m.shots;
        const auto backend = make_backend(o.backend, cfg.noise_p, lm);
        const PredictBatchResult r =
            predict_batch(sel, m, *backend, mix_seed(cfg.seed, kPredictTag));
        if (r.failure_index) {
            throw std::runtime_error("prediction failed at sample " +
                                     std::to_string(*r.failure_index) + ": " +
                                     r.failure_message);
        }
        n = static_cast<int>(r.labels.size());
        for (int i = 0; i < n; ++i) {
            csv += std::to_string(i) + ',' + std::to_string(r.labels[i]) + '\n';
            hits += r.labels[static_cast<std::size_t>(i)] == sel.labels[i];
        }
    } else if (mj.contains("svm")) {
        const SvmModel m = svm_from_json(mj.at("svm").dump());
        n = sel.n_samples();
        for (int i = 0; i < n; ++i) {
            const int label = predict(m, sel.features.row(i));
            csv += std::to_string(i) + ',' + std::to_string(label) + '\n';
            hits += label == sel.labels[i];
        }
    } else {
        throw ValidationError("model file carries neither an svm nor a vqc payload");
    }
    if (n > 0) {
        std::cerr << "accuracy vs labels: " << static_cast<double>(hits) / n << "\n";
    }
    write_output(csv, o.out_path);
    return 0;
}

int run_bench(const Options& o, const CLI::App* sub) {
    const BenchmarkConfig cfg = effective_config(o, sub);
    const BenchmarkReport report = run_benchmark(cfg);
    write_output(emit_report(report, report_format_from_string(o.format)), o.out_path);
    return 0;
}

int run_qubo_probe(const Options& o, const CLI::App*) {
    const std::vector<ScalingProbeRow> rows =
        qubo_scaling_probe(o.probe_sizes, o.probe_bits, o.seed, !o.no_timing);
    std::string csv = "n_samples,dimension,entries,build_ms,solve_ms\n";
    for (const ScalingProbeRow& r : rows) {
        csv += std::to_string(r.n_samples) + ',' + std::to_string(r.dimension) + ',' +
               std::to_string(r.entries) + ',' + double_repr(r.build_ms) + ',' +
               double_repr(r.solve_ms) + '\n';
    }
    write_output(csv, o.out_path);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"seat-heating prediction benchmark toolkit: classical, quantum-simulated "
                 "and annealing-based classifiers on drive telemetry"};
    app.require_subcommand(1);
    Options o;

    CLI::App* gen = app.add_subcommand("generate", "emit a synthetic drive-telemetry CSV");
    gen->add_option("--seed", o.seed, "base RNG seed");
    gen->add_option("--out", o.out_path, "output file (default stdout)");
    gen->add_option("--config", o.config_path, "JSON config file");

    CLI::App* self = app.add_subcommand("select-features", "rank features by Fisher score");
    self->add_option("--data", o.data_path, "drive CSV (default: synthetic)");
    self->add_option("--seed", o.seed, "base RNG seed");
    self->add_option("--k", o.k, "emit only the top k features");
    self->add_option("--out", o.out_path, "output file (default stdout)");
    self->add_option("--config", o.config_path, "JSON config file");

    CLI::App* tr = app.add_subcommand("train", "train one classifier, emit a model JSON");
    tr->add_option("--data", o.data_path, "drive CSV (default: synthetic)");
    tr->add_option("--method", o.method, "svm|vqc|qubo")->capture_default_str();
    tr->add_option("--backend", o.backend, "simulator|noisy|remote-mock")
        ->capture_default_str();
    tr->add_option("--seed", o.seed, "base RNG seed");
    tr->add_option("--shots", o.shots, "shots per circuit")->capture_default_str();
    tr->add_option("--k", o.k, "features kept after ranking")->capture_default_str();
    tr->add_option("--noise", o.noise, "per-gate error for the noisy backends");
    tr->add_option("--out", o.out_path, "model file (default stdout)");
    tr->add_option("--config", o.config_path, "JSON config file");

    CLI::App* pr = app.add_subcommand("predict", "label samples with a trained model");
    pr->add_option("--model", o.model_path, "model JSON from train")->required();
    pr->add_option("--data", o.data_path, "drive CSV (default: synthetic)");
    pr->add_option("--backend", o.backend, "simulator|noisy|remote-mock")
        ->capture_default_str();
    pr->add_option("--seed", o.seed, "base RNG seed");
    pr->add_option("--noise", o.noise, "per-gate error for the noisy backends");
    pr->add_option("--out", o.out_path, "output file (default stdout)");
    pr->add_option("--config", o.config_path, "JSON config file");

    CLI::App* be = app.add_subcommand("benchmark", "run the full method comparison");
    be->add_option("--config", o.config_path, "JSON config file");
    be->add_option("--seed", o.seed, "base RNG seed");
    be->add_option("--repetitions", o.repetitions, "independent runs per method")
        ->capture_default_str();
    be->add_option("--k", o.k, "features kept after ranking")->capture_default_str();
    be->add_option("--shots", o.shots, "shots per circuit")->capture_default_str();
    be->add_option("--batch", o.batch, "remote batch size")->capture_default_str();
    be->add_option("--noise", o.noise, "remote-mock per-gate error");
    be->add_option("--format", o.format, "markdown|csv|json")->capture_default_str();
    be->add_flag("--no-wall-time", o.no_wall_time,
                 "report wall-clock times as zero for reproducible output");
    be->add_option("--out", o.out_path, "output file (default stdout)");

    CLI::App* qp = app.add_subcommand("qubo-probe", "measure QUBO build/solve scaling");
    qp->add_option("--n", o.probe_sizes, "sample counts to probe")
        ->delimiter(',')
        ->capture_default_str();
    qp->add_option("--bits", o.probe_bits, "encoding bits per coefficient")
        ->capture_default_str();
    qp->add_option("--seed", o.seed, "base RNG seed");
    qp->add_flag("--no-timing", o.no_timing, "report times as zero for reproducible output");
    qp->add_option("--out", o.out_path, "output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }

    try {
        if (gen->parsed()) return run_generate(o, gen);
        if (self->parsed()) return run_select_features(o, self);
        if (tr->parsed()) return run_train(o, tr);
        if (pr->parsed()) return run_predict(o, pr);
        if (be->parsed()) return run_bench(o, be);
        if (qp->parsed()) return run_qubo_probe(o, qp);
        std::cerr << "error: no verb given\n";
        return 1;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
