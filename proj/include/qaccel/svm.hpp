#pragma once

#include "qaccel/dataset.hpp"
#include "qaccel/feature_map.hpp"

namespace qaccel {

enum class KernelKind { Linear, Poly, Rbf, Sigmoid };

const char* to_string(KernelKind kind);
KernelKind kernel_kind_from_string(const std::string& name);

// gamma_auto resolves gamma to 1/n_features at evaluation time (0.5 for two
// features); an explicit gamma must be positive for RBF.
struct KernelSpec {
    KernelKind kind = KernelKind::Rbf;
    bool gamma_auto = true;
    double gamma = 0.0; // used when gamma_auto is false
    int degree = 3;     // poly
    double coef0 = 0.0; // poly, sigmoid

    static KernelSpec linear() { return {KernelKind::Linear, true, 0.0, 3, 0.0}; }
    static KernelSpec rbf() { return {KernelKind::Rbf, true, 0.0, 3, 0.0}; }
    static KernelSpec rbf_gamma(double g) { return {KernelKind::Rbf, false, g, 3, 0.0}; }
    static KernelSpec poly(int d = 3, double r = 0.0) { return {KernelKind::Poly, true, 0.0, d, r}; }
    static KernelSpec sigmoid(double r = 0.0) { return {KernelKind::Sigmoid, true, 0.0, 3, r}; }
};

double resolve_gamma(const KernelSpec& spec, int n_features);

// linear: u.v; poly: (g u.v + r)^d; rbf: exp(-g |u-v|^2); sigmoid: tanh(g u.v + r).
double kernel_eval(const KernelSpec& spec, const FeatureVector& u, const FeatureVector& v);

struct SvmModel {
    Eigen::MatrixXd support_vectors; // one row per retained vector
    Eigen::VectorXd dual_coefs;      // y_i * alpha_i per support vector
    double bias = 0.0;
    KernelSpec kernel;
    double C = 1.0;

    int n_features() const { return static_cast<int>(support_vectors.cols()); }
};

// Soft-margin dual via SMO with second-order working-set selection.
// Labels enter as {0,1} and are mapped to {-1,+1} internally; support
// vectors with alpha <= 1e-8 are dropped from the model. Stops when the
// maximal KKT violation falls below tol.
SvmModel fit_svm(const Dataset& data, const KernelSpec& spec, double C = 1.0,
                 double tol = 1e-3);

// sum_i dual_coefs_i K(sv_i, x) + bias.
double decision_function(const SvmModel& model, const FeatureVector& x);

// 1 if the margin is strictly positive, else 0.
int predict(const SvmModel& model, const FeatureVector& x);

// Fraction of samples whose prediction matches the label.
double accuracy(const SvmModel& model, const Dataset& data);

// Dual objective sum(alpha) - 1/2 sum_ij alpha_i alpha_j y_i y_j K_ij
// evaluated over the retained support vectors (dropped alphas are <= 1e-8).
double dual_objective(const SvmModel& model);

// Fits every candidate on train, scores accuracy on test, returns the
// argmax; ties keep the earliest candidate.
KernelSpec select_kernel(const Dataset& train, const Dataset& test,
                         const std::vector<KernelSpec>& candidates, double C = 1.0);

std::string svm_to_json(const SvmModel& model);
SvmModel svm_from_json(const std::string& text);

} // namespace qaccel
