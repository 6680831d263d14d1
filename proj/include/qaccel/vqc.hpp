#pragma once

#include <optional>

#include "qaccel/backend.hpp"
#include "qaccel/dataset.hpp"
#include "qaccel/feature_map.hpp"

namespace qaccel {

enum class EntanglerKind { LinearCz, FullCz };

const char* to_string(EntanglerKind kind);
EntanglerKind entangler_from_string(const std::string& name);

// Per layer: one RX and one RY per qubit followed by the CZ entangler
// pattern, so the trainable parameter count is 2 * n_qubits * layers.
// Theta layout: layer l holds RX angles at [l*2n, l*2n+n) and RY angles at
// [l*2n+n, l*2n+2n).
struct AnsatzSpec {
    int n_qubits = 2;
    int layers = 2;
    EntanglerKind entangler = EntanglerKind::LinearCz;

    int param_count() const { return 2 * n_qubits * layers; }
};

using ThetaVector = Eigen::VectorXd;

Circuit build_ansatz(const ThetaVector& theta, const AnsatzSpec& spec);

// Classifier state: embedding circuit shape, trained ansatz angles, and the
// parity label rule (odd bit-sum outcome -> label 1).
struct VqcModel {
    FeatureMapSpec feature_map_spec;
    AnsatzSpec ansatz_spec;
    ThetaVector theta;
    int shots = 1000;
    // Training provenance, carried for reproducibility.
    std::uint64_t seed = 0;
    int iterations = 0;
    double final_cost = 0.0;
};

// Embedding circuit for x followed by the ansatz.
Circuit build_model_circuit(const FeatureVector& x, const VqcModel& model);

// 1 for odd bit-sum, 0 for even.
int outcome_parity(const std::string& outcome);

// Fraction of shots with odd parity.
double parity_fraction(const ShotCounts& counts);

// Exact p(label 1) = sum over odd-parity basis states of |amplitude|^2,
// from the ideal statevector. Oracle/diagnostic path, no sampling.
double exact_parity_probability(const FeatureVector& x, const VqcModel& model);

struct Classification {
    int label = 0;
    double p_hat = 0.0; // estimated probability of label 1
};

// Runs the model circuit for model.shots shots on the backend; label 1 iff
// p_hat > 0.5 (an exact tie stays 0).
Classification classify(const FeatureVector& x, const VqcModel& model,
                        ExecutionBackend& backend, std::uint64_t seed);

// Mean binary cross-entropy of parity estimates against labels, p_hat
// clamped to [1e-6, 1 - 1e-6]. Per-sample shot streams derive from
// (seed, sample index).
double empirical_cost(const Dataset& data, const ThetaVector& theta,
                      const FeatureMapSpec& fm, const AnsatzSpec& ansatz, int shots,
                      ExecutionBackend& backend, std::uint64_t seed);

// SPSA training configuration. Gain sequences:
//   a_k = a / (A + k + 1)^alpha,  c_k = c / (k + 1)^gamma
// with the standard exponents alpha = 0.602, gamma = 0.101.
struct TrainConfig {
    int max_iterations = 200;
    int shots = 1000;
    double a = 2.0; // calibrated on the two-blob fixture; see TrainConfig docs
    double c = 0.1;
    double stability = 20.0; // A
    double alpha = 0.602;
    double gamma = 0.101;
    double convergence_tolerance = 1e-3;
    int patience = 20; // iterations without best-cost improvement before stopping
    std::uint64_t seed = 0;
};

// SPSA loop: theta starts uniform on [-pi, pi]; each iteration draws a
// +/-1 perturbation per coordinate, estimates the gradient from the two
// cost evaluations at theta +/- c_k * delta (sharing one shot-seed so shot
// noise partially cancels), steps theta, and tracks the best cost seen.
// Returns the best theta; fully deterministic per seed. The gain defaults
// were calibrated once on the two-blob reference fixture: a = 2.0 gives
// initial steps of a useful size under the (A + k + 1)^0.602 decay, where
// the conventional a ~ 0.2 moves theta only millirads per iteration and
// stalls far from any optimum.
VqcModel train(const Dataset& data, const FeatureMapSpec& fm, const AnsatzSpec& ansatz,
               const TrainConfig& cfg, ExecutionBackend& backend);

struct PredictBatchResult {
    std::vector<int> labels;                // one per completed sample
    std::optional<double> accuracy;         // unset for an empty dataset
    int circuits = 0;                       // circuits executed (one per sample)
    std::optional<std::size_t> failure_index; // first sample whose execution failed
    std::string failure_message;
};

// One circuit per sample at model.shots shots. If the backend fails
// mid-batch, the labels collected so far are returned together with the
// failing sample's index.
PredictBatchResult predict_batch(const Dataset& data, const VqcModel& model,
                                 ExecutionBackend& backend, std::uint64_t seed);

std::string vqc_to_json(const VqcModel& model);
VqcModel vqc_from_json(const std::string& text);

} // namespace qaccel
