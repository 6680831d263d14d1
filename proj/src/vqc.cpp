#include "qaccel/vqc.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include <json.hpp>

namespace qaccel {

namespace {

constexpr double kProbClamp = 1e-6;
constexpr std::uint64_t kInitStream = 0x696e6974;    // "init"
constexpr std::uint64_t kPerturbStream = 0x70657274; // "pert"
constexpr std::uint64_t kEvalStream = 0x6576616c;    // "eval"
constexpr std::uint64_t kTrackStream = 0x7472636b;   // "trck"

void validate_ansatz(const AnsatzSpec& spec) {
    if (spec.n_qubits < 1) throw ValidationError("ansatz needs at least one qubit");
    if (spec.layers < 1) throw ValidationError("ansatz needs at least one layer");
}

double clamp_prob(double p) { return std::clamp(p, kProbClamp, 1.0 - kProbClamp); }

double bce(double p_hat, int label) {
    const double p = clamp_prob(p_hat);
    return label == 1 ? -std::log(p) : -std::log(1.0 - p);
}

} // namespace

const char* to_string(EntanglerKind kind) {
    switch (kind) {
        case EntanglerKind::LinearCz: return "linear_cz";
        case EntanglerKind::FullCz: return "full_cz";
    }
    throw ValidationError("unknown entangler kind");
}

EntanglerKind entangler_from_string(const std::string& name) {
    if (name == "linear_cz") return EntanglerKind::LinearCz;
    if (name == "full_cz") return EntanglerKind::FullCz;
    throw ValidationError("unknown entangler kind: " + name);
}

Circuit build_ansatz(const ThetaVector& theta, const AnsatzSpec& spec) {
    validate_ansatz(spec);
    if (theta.size() != spec.param_count()) {
        throw ValidationError("theta has " + std::to_string(theta.size()) +
                              " parameters, ansatz expects " +
                              std::to_string(spec.param_count()));
    }
    const int n = spec.n_qubits;
    Circuit circuit(n);
    for (int l = 0; l < spec.layers; ++l) {
        const int base = l * 2 * n;
        for (int q = 0; q < n; ++q) circuit.push(Gate::rx(q, theta[base + q]));
        for (int q = 0; q < n; ++q) circuit.push(Gate::ry(q, theta[base + n + q]));
        if (spec.entangler == EntanglerKind::LinearCz) {
            for (int q = 0; q + 1 < n; ++q) circuit.push(Gate::cz(q, q + 1));
        } else {
            for (int a = 0; a < n; ++a) {
                for (int b = a + 1; b < n; ++b) circuit.push(Gate::cz(a, b));
            }
        }
    }
    return circuit;
}

Circuit build_model_circuit(const FeatureVector& x, const VqcModel& model) {
    if (model.feature_map_spec.n_features != model.ansatz_spec.n_qubits) {
        throw ValidationError("feature map and ansatz disagree on qubit count");
    }
    Circuit circuit = build_feature_map(x, model.feature_map_spec);
    circuit.append(build_ansatz(model.theta, model.ansatz_spec));
    return circuit;
}

int outcome_parity(const std::string& outcome) {
    int ones = 0;
    for (char c : outcome) ones += c == '1';
    return ones & 1;
}

double parity_fraction(const ShotCounts& counts) {
    if (counts.total_shots <= 0) throw ValidationError("shot counts are empty");
    long odd = 0;
    for (const auto& [outcome, count] : counts.counts) {
        if (outcome_parity(outcome)) odd += count;
    }
    return static_cast<double>(odd) / static_cast<double>(counts.total_shots);
}

double exact_parity_probability(const FeatureVector& x, const VqcModel& model) {
    const StateVector state = run_statevector(build_model_circuit(x, model));
    double p = 0.0;
    for (Eigen::Index i = 0; i < state.amplitudes.size(); ++i) {
        if (std::popcount(static_cast<std::uint64_t>(i)) & 1) {
            p += std::norm(state.amplitudes[i]);
        }
    }
    return p;
}

Classification classify(const FeatureVector& x, const VqcModel& model,
                        ExecutionBackend& backend, std::uint64_t seed) {
    if (model.shots < 1) throw ValidationError("model shots must be >= 1");
    const Circuit circuit = build_model_circuit(x, model);
    ShotCounts counts;
    try {
        counts = backend.run(circuit, model.shots, seed);
    } catch (const std::exception& e) {
        throw std::runtime_error(std::string("backend '") + backend.name() +
                                 "' failed during classification: " + e.what());
    }
    Classification result;
    result.p_hat = parity_fraction(counts);
    result.label = result.p_hat > 0.5 ? 1 : 0;
    return result;
}

double empirical_cost(const Dataset& data, const ThetaVector& theta,
                      const FeatureMapSpec& fm, const AnsatzSpec& ansatz, int shots,
                      ExecutionBackend& backend, std::uint64_t seed) {
    data.validate();
    if (data.n_samples() == 0) throw ValidationError("cost needs a nonempty dataset");
    VqcModel probe;
    probe.feature_map_spec = fm;
    probe.ansatz_spec = ansatz;
    probe.theta = theta;
    probe.shots = shots;
    double total = 0.0;
    for (int i = 0; i < data.n_samples(); ++i) {
        const Classification c =
            classify(data.features.row(i), probe, backend,
                     mix_seed(seed, kItemStream, static_cast<std::uint64_t>(i)));
        total += bce(c.p_hat, data.labels[i]);
    }
    return total / static_cast<double>(data.n_samples());
}

VqcModel train(const Dataset& data, const FeatureMapSpec& fm, const AnsatzSpec& ansatz,
               const TrainConfig& cfg, ExecutionBackend& backend) {
    data.validate();
    validate_ansatz(ansatz);
    if (data.n_samples() == 0) throw ValidationError("training needs a nonempty dataset");
    if (data.n_features() != fm.n_features) {
        throw ValidationError("dataset feature count does not match feature map");
    }
    if (fm.n_features != ansatz.n_qubits) {
        throw ValidationError("feature map and ansatz disagree on qubit count");
    }
    if (cfg.max_iterations < 1) throw ValidationError("max_iterations must be >= 1");
    if (cfg.shots < 1) throw ValidationError("shots must be >= 1");

    const int n_params = ansatz.param_count();
    Rng init_rng(mix_seed(cfg.seed, kInitStream));
    ThetaVector theta(n_params);
    for (int p = 0; p < n_params; ++p) theta[p] = init_rng.uniform(-kPi, kPi);

    auto cost_at = [&](const ThetaVector& t, std::uint64_t seed) {
        return empirical_cost(data, t, fm, ansatz, cfg.shots, backend, seed);
    };

    ThetaVector best_theta = theta;
    double best_cost = cost_at(theta, mix_seed(cfg.seed, kTrackStream, 0));
    int iterations_run = 0;
    int stall = 0;

    Rng perturb_rng(mix_seed(cfg.seed, kPerturbStream));
    ThetaVector delta(n_params);
    for (int k = 0; k < cfg.max_iterations; ++k) {
        const double a_k = cfg.a / std::pow(cfg.stability + k + 1, cfg.alpha);
        const double c_k = cfg.c / std::pow(k + 1, cfg.gamma);
        for (int p = 0; p < n_params; ++p) {
            delta[p] = perturb_rng.bernoulli(0.5) ? 1.0 : -1.0;
        }
        // One shared shot-seed for both sides of the perturbation, so shot
        // noise common to both evaluations cancels in the difference.
        const std::uint64_t eval_seed =
            mix_seed(cfg.seed, kEvalStream, static_cast<std::uint64_t>(k));
        const double cost_plus = cost_at(theta + c_k * delta, eval_seed);
        const double cost_minus = cost_at(theta - c_k * delta, eval_seed);
        const double scale = (cost_plus - cost_minus) / (2.0 * c_k);
        // ghat_p = scale / delta_p = scale * delta_p since delta_p is +/-1.
        theta -= a_k * scale * delta;
        ++iterations_run;

        const double cost_now =
            cost_at(theta, mix_seed(cfg.seed, kTrackStream, static_cast<std::uint64_t>(k) + 1));
        if (cost_now < best_cost - cfg.convergence_tolerance) {
            best_cost = cost_now;
            best_theta = theta;
            stall = 0;
        } else {
            if (cost_now < best_cost) {
                best_cost = cost_now;
                best_theta = theta;
            }
            if (++stall >= cfg.patience) break;
        }
    }

    VqcModel model;
    model.feature_map_spec = fm;
    model.ansatz_spec = ansatz;
    model.theta = best_theta;
    model.shots = cfg.shots;
    model.seed = cfg.seed;
    model.iterations = iterations_run;
    model.final_cost = best_cost;
    return model;
}

PredictBatchResult predict_batch(const Dataset& data, const VqcModel& model,
                                 ExecutionBackend& backend, std::uint64_t seed) {
    data.validate();
    PredictBatchResult result;
    if (data.n_samples() == 0) return result;
    result.labels.reserve(static_cast<std::size_t>(data.n_samples()));
    int hits = 0;
    for (int i = 0; i < data.n_samples(); ++i) {
        Classification c;
        try {
            c = classify(data.features.row(i), model, backend,
                         mix_seed(seed, kItemStream, static_cast<std::uint64_t>(i)));
        } catch (const std::exception& e) {
            result.failure_index = static_cast<std::size_t>(i);
            result.failure_message = e.what();
            break;
        }
        result.labels.push_back(c.label);
        result.circuits += 1;
        hits += c.label == data.labels[i];
    }
    if (!result.labels.empty()) {
        result.accuracy = static_cast<double>(hits) / static_cast<double>(result.labels.size());
    }
    return result;
}

std::string vqc_to_json(const VqcModel& model) {
    nlohmann::json j;
    j["feature_map"] = {{"n_features", model.feature_map_spec.n_features},
                        {"repetitions", model.feature_map_spec.repetitions},
                        {"include_two_body", model.feature_map_spec.include_two_body}};
    j["ansatz"] = {{"n_qubits", model.ansatz_spec.n_qubits},
                   {"layers", model.ansatz_spec.layers},
                   {"entangler", to_string(model.ansatz_spec.entangler)}};
    j["theta"] = std::vector<double>(model.theta.begin(), model.theta.end());
    j["shots"] = model.shots;
    j["metadata"] = {{"seed", model.seed},
                     {"iterations", model.iterations},
                     {"final_cost", model.final_cost}};
    return j.dump(2);
}

VqcModel vqc_from_json(const std::string& text) {
    try {
        const nlohmann::json j = nlohmann::json::parse(text);
        VqcModel model;
        const auto& fm = j.at("feature_map");
        model.feature_map_spec.n_features = fm.at("n_features").get<int>();
        model.feature_map_spec.repetitions = fm.at("repetitions").get<int>();
        model.feature_map_spec.include_two_body = fm.at("include_two_body").get<bool>();
        const auto& an = j.at("ansatz");
        model.ansatz_spec.n_qubits = an.at("n_qubits").get<int>();
        model.ansatz_spec.layers = an.at("layers").get<int>();
        model.ansatz_spec.entangler = entangler_from_string(an.at("entangler").get<std::string>());
        const auto theta = j.at("theta").get<std::vector<double>>();
        model.theta = Eigen::Map<const Eigen::VectorXd>(theta.data(),
                                                        static_cast<Eigen::Index>(theta.size()));
        if (model.theta.size() != model.ansatz_spec.param_count()) {
            throw ValidationError("theta length does not match ansatz parameter count");
        }
        model.shots = j.at("shots").get<int>();
        if (j.contains("metadata")) {
            const auto& meta = j.at("metadata");
            model.seed = meta.value("seed", std::uint64_t{0});
            model.iterations = meta.value("iterations", 0);
            model.final_cost = meta.value("final_cost", 0.0);
        }
        return model;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("invalid classifier JSON: ") + e.what());
    }
}

} // namespace qaccel
