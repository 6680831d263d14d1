#include "qaccel/feature_map.hpp"

#include <cmath>

namespace qaccel {

double phase_one_body(const FeatureVector& x, int k) {
    if (k < 0 || k >= x.size()) throw ValidationError("one-body phase index out of range");
    return x[k];
}

double phase_two_body(const FeatureVector& x, int k, int l) {
    if (k == l) throw ValidationError("two-body phase needs distinct indices");
    if (k < 0 || k >= x.size() || l < 0 || l >= x.size()) {
        throw ValidationError("two-body phase index out of range");
    }
    return (kPi - x[k]) * (kPi - x[l]);
}

Circuit build_feature_map(const FeatureVector& x, const FeatureMapSpec& spec) {
    if (spec.n_features <= 0) throw ValidationError("feature map needs at least one feature");
    if (spec.repetitions < 1) throw ValidationError("feature map repetitions must be >= 1");
    if (x.size() != spec.n_features) {
        throw ValidationError("feature vector has " + std::to_string(x.size()) +
                              " components, spec expects " + std::to_string(spec.n_features));
    }
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        if (!std::isfinite(x[i])) throw ValidationError("feature values must be finite");
    }
    const int n = spec.n_features;
    Circuit circuit(n);
    for (int rep = 0; rep < spec.repetitions; ++rep) {
        for (int q = 0; q < n; ++q) circuit.push(Gate::h(q));
        for (int q = 0; q < n; ++q) {
            circuit.push(Gate::rz(q, -2.0 * phase_one_body(x, q)));
        }
        if (spec.include_two_body) {
            for (int q = 0; q + 1 < n; ++q) {
                circuit.push(Gate::rzz(q, q + 1, phase_two_body(x, q, q + 1)));
            }
        }
    }
    return circuit;
}

double embedding_fidelity(const FeatureVector& x1, const FeatureVector& x2,
                          const FeatureMapSpec& spec) {
    const StateVector s1 = run_statevector(build_feature_map(x1, spec));
    const StateVector s2 = run_statevector(build_feature_map(x2, spec));
    const std::complex<double> inner = s1.amplitudes.adjoint() * s2.amplitudes;
    return std::norm(inner);
}

} // namespace qaccel
