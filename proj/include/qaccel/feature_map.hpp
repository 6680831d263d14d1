#pragma once

#include <Eigen/Dense>

#include "qaccel/circuit.hpp"
#include "qaccel/statevector.hpp"

namespace qaccel {

// Classical feature vector; components are expected pre-scaled to [0, pi]
// by the pipeline (the scaler enforces it) though the map itself only
// requires finite values.
using FeatureVector = Eigen::VectorXd;

// Data-embedding circuit shape: per repetition, H on every qubit followed by
// a diagonal phase block:
//   exp(+i phi_k(x) Z_k)            one per qubit   (phi_k(x) = x_k)
//   exp(+i phi_kl(x) Z_k Z_l)       one per coupled pair
//                                   (phi_kl(x) = (pi - x_k)(pi - x_l))
// The single-qubit factor is realized as RZ(-2 phi) under the simulator's
// RZ(t) = exp(-i t Z / 2) convention; the two-qubit factor maps directly to
// RZZ(phi) = exp(+i phi Z(x)Z). Pairs form a linear chain (0,1),(1,2),...;
// for two features that is the single pair (0,1).
struct FeatureMapSpec {
    int n_features = 2;
    int repetitions = 2;
    bool include_two_body = true;
};

// phi_k(x) = x_k.
double phase_one_body(const FeatureVector& x, int k);

// phi_kl(x) = (pi - x_k)(pi - x_l); k == l is rejected.
double phase_two_body(const FeatureVector& x, int k, int l);

// Builds the embedding circuit. Gate kinds and positions depend only on the
// spec; x only changes angles.
Circuit build_feature_map(const FeatureVector& x, const FeatureMapSpec& spec);

// |<Phi(x1)|Phi(x2)>|^2 — diagnostic for kernel sanity checks.
double embedding_fidelity(const FeatureVector& x1, const FeatureVector& x2,
                          const FeatureMapSpec& spec);

} // namespace qaccel
