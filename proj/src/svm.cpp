#include "qaccel/svm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <list>
#include <unordered_map>

#include <json.hpp>

namespace qaccel {

namespace {

constexpr double kAlphaKeep = 1e-8; // below this an alpha is treated as zero
constexpr double kTau = 1e-12;      // curvature floor in the pair update

void validate_kernel(const KernelSpec& spec) {
    if (!spec.gamma_auto && spec.gamma <= 0.0 && spec.kind == KernelKind::Rbf) {
        throw ValidationError("rbf kernel needs gamma > 0");
    }
    if (spec.kind == KernelKind::Poly && spec.degree < 1) {
        throw ValidationError("poly kernel needs degree >= 1");
    }
}

// Bounded cache of kernel-matrix rows keyed by sample index. Small problems
// fit entirely; large ones evict least-recently-used rows.
class KernelRowCache {
public:
    KernelRowCache(const Eigen::MatrixXd& x, const KernelSpec& spec, std::size_t max_rows)
        : x_(x), spec_(spec), gamma_(resolve_gamma(spec, static_cast<int>(x.cols()))),
          max_rows_(std::max<std::size_t>(2, max_rows)) {}

    const Eigen::VectorXd& row(int i) {
        auto it = cache_.find(i);
        if (it != cache_.end()) {
            order_.splice(order_.begin(), order_, it->second.second);
            return it->second.first;
        }
        if (cache_.size() >= max_rows_) {
            cache_.erase(order_.back());
            order_.pop_back();
        }
        order_.push_front(i);
        auto [pos, inserted] =
            cache_.emplace(i, std::make_pair(compute_row(i), order_.begin()));
        (void)inserted;
        return pos->second.first;
    }

private:
    Eigen::VectorXd compute_row(int i) const {
        const Eigen::Index n = x_.rows();
        Eigen::VectorXd out(n);
        switch (spec_.kind) {
            case KernelKind::Linear:
                out = x_ * x_.row(i).transpose();
                break;
            case KernelKind::Poly:
                out = ((x_ * x_.row(i).transpose()).array() * gamma_ + spec_.coef0)
                          .pow(spec_.degree);
                break;
            case KernelKind::Rbf: {
                const Eigen::VectorXd d2 =
                    (x_.rowwise() - x_.row(i)).rowwise().squaredNorm();
                out = (-gamma_ * d2.array()).exp();
                break;
            }
            case KernelKind::Sigmoid:
                out = ((x_ * x_.row(i).transpose()).array() * gamma_ + spec_.coef0).tanh();
                break;
        }
        return out;
    }

    const Eigen::MatrixXd& x_;
    const KernelSpec& spec_;
    const double gamma_;
    const std::size_t max_rows_;
    std::list<int> order_;
    std::unordered_map<int, std::pair<Eigen::VectorXd, std::list<int>::iterator>> cache_;
};

} // namespace

const char* to_string(KernelKind kind) {
    switch (kind) {
        case KernelKind::Linear: return "linear";
        case KernelKind::Poly: return "poly";
        case KernelKind::Rbf: return "rbf";
        case KernelKind::Sigmoid: return "sigmoid";
    }
    throw ValidationError("unknown kernel kind");
}

KernelKind kernel_kind_from_string(const std::string& name) {
    if (name == "linear") return KernelKind::Linear;
    if (name == "poly") return KernelKind::Poly;
    if (name == "rbf") return KernelKind::Rbf;
    if (name == "sigmoid") return KernelKind::Sigmoid;
    throw ValidationError("unknown kernel kind: " + name);
}

double resolve_gamma(const KernelSpec& spec, int n_features) {
    if (spec.gamma_auto) {
        if (n_features < 1) throw ValidationError("gamma auto needs at least one feature");
        return 1.0 / static_cast<double>(n_features);
    }
    return spec.gamma;
}

double kernel_eval(const KernelSpec& spec, const FeatureVector& u, const FeatureVector& v) {
    if (u.size() != v.size()) throw ValidationError("kernel arguments differ in dimension");
    validate_kernel(spec);
    const double gamma = resolve_gamma(spec, static_cast<int>(u.size()));
    switch (spec.kind) {
        case KernelKind::Linear:
            return u.dot(v);
        case KernelKind::Poly:
            return std::pow(gamma * u.dot(v) + spec.coef0, spec.degree);
        case KernelKind::Rbf:
            return std::exp(-gamma * (u - v).squaredNorm());
        case KernelKind::Sigmoid:
            return std::tanh(gamma * u.dot(v) + spec.coef0);
    }
    throw ValidationError("unknown kernel kind");
}

SvmModel fit_svm(const Dataset& data, const KernelSpec& spec, double C, double tol) {
    data.validate();
    validate_kernel(spec);
    if (C <= 0.0) throw ValidationError("C must be positive");
    if (tol <= 0.0) throw ValidationError("tolerance must be positive");
    const int n = data.n_samples();
    if (n < 2) throw ValidationError("fit needs at least two samples");

    Eigen::VectorXd y(n);
    bool seen[2] = {false, false};
    for (int i = 0; i < n; ++i) {
        y[i] = data.labels[i] == 1 ? 1.0 : -1.0;
        seen[data.labels[i]] = true;
    }
    if (!seen[0] || !seen[1]) throw ValidationError("fit needs samples from both classes");

    // ~256 MB worth of rows, all rows for small problems.
    const std::size_t max_rows =
        std::max<std::size_t>(64, (std::size_t{256} << 20) / (sizeof(double) * static_cast<std::size_t>(n)));
    KernelRowCache cache(data.features, spec, max_rows);

    Eigen::VectorXd k_diag(n);
    for (int i = 0; i < n; ++i) {
        k_diag[i] = kernel_eval(spec, data.features.row(i), data.features.row(i));
    }

    Eigen::VectorXd alpha = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd grad = Eigen::VectorXd::Constant(n, -1.0); // d/dalpha of the primal-min dual

    const long max_iter = std::max<long>(10000000L, 100L * n);
    for (long iter = 0; iter < max_iter; ++iter) {
        // Working-set selection: i maximizes the KKT violation over I_up;
        // j minimizes the second-order objective decrease estimate over I_low.
        int i = -1;
        double m_up = -std::numeric_limits<double>::infinity();
        for (int t = 0; t < n; ++t) {
            const bool in_up = (y[t] > 0 && alpha[t] < C) || (y[t] < 0 && alpha[t] > 0);
            if (!in_up) continue;
            const double v = -y[t] * grad[t];
            if (v > m_up) {
                m_up = v;
                i = t;
            }
        }
        if (i < 0) break;
        const Eigen::VectorXd& k_i = cache.row(i);

        int j = -1;
        double m_low = std::numeric_limits<double>::infinity();
        double best_gain = 0.0;
        for (int t = 0; t < n; ++t) {
            const bool in_low = (y[t] < 0 && alpha[t] < C) || (y[t] > 0 && alpha[t] > 0);
            if (!in_low) continue;
            const double v = -y[t] * grad[t];
            m_low = std::min(m_low, v);
            const double b_t = m_up - v;
            if (b_t <= 0.0) continue;
            double a_t = k_diag[i] + k_diag[t] - 2.0 * k_i[t];
            if (a_t <= 0.0) a_t = kTau;
            const double gain = b_t * b_t / a_t;
            if (gain > best_gain) {
                best_gain = gain;
                j = t;
            }
        }
        if (j < 0 || m_up - m_low < tol) break;
        const Eigen::VectorXd& k_j = cache.row(j);

        // Analytic two-variable update with box clipping.
        const double old_ai = alpha[i];
        const double old_aj = alpha[j];
        double quad = k_diag[i] + k_diag[j] - 2.0 * k_i[j];
        if (quad <= 0.0) quad = kTau;
        if (y[i] != y[j]) {
            const double delta = (-grad[i] - grad[j]) / quad;
            const double diff = alpha[i] - alpha[j];
            alpha[i] += delta;
            alpha[j] += delta;
            if (diff > 0.0) {
                if (alpha[j] < 0.0) { alpha[j] = 0.0; alpha[i] = diff; }
            } else {
                if (alpha[i] < 0.0) { alpha[i] = 0.0; alpha[j] = -diff; }
            }
            if (diff > 0.0) {
                if (alpha[i] > C) { alpha[i] = C; alpha[j] = C - diff; }
            } else {
                if (alpha[j] > C) { alpha[j] = C; alpha[i] = C + diff; }
            }
        } else {
            const double delta = (grad[i] - grad[j]) / quad;
            const double sum = alpha[i] + alpha[j];
            alpha[i] -= delta;
            alpha[j] += delta;
            if (sum > C) {
                if (alpha[i] > C) { alpha[i] = C; alpha[j] = sum - C; }
            } else {
                if (alpha[j] < 0.0) { alpha[j] = 0.0; alpha[i] = sum; }
            }
            if (sum > C) {
                if (alpha[j] > C) { alpha[j] = C; alpha[i] = sum - C; }
            } else {
                if (alpha[i] < 0.0) { alpha[i] = 0.0; alpha[j] = sum; }
            }
        }

        const double d_i = alpha[i] - old_ai;
        const double d_j = alpha[j] - old_aj;
        if (d_i == 0.0 && d_j == 0.0) break; // numerically stuck
        // grad_t += Q_ti d_i + Q_tj d_j with Q_ts = y_t y_s K_ts.
        grad.array() += y.array() * (y[i] * d_i * k_i.array() + y[j] * d_j * k_j.array());
    }

    // Bias from the final gradient (average over free vectors when any).
    double upper = std::numeric_limits<double>::infinity();
    double lower = -std::numeric_limits<double>::infinity();
    double sum_free = 0.0;
    int n_free = 0;
    for (int t = 0; t < n; ++t) {
        const double yg = y[t] * grad[t];
        if (alpha[t] >= C) {
            if (y[t] < 0) upper = std::min(upper, yg);
            else lower = std::max(lower, yg);
        } else if (alpha[t] <= 0.0) {
            if (y[t] > 0) upper = std::min(upper, yg);
            else lower = std::max(lower, yg);
        } else {
            ++n_free;
            sum_free += yg;
        }
    }
    const double rho = n_free > 0 ? sum_free / n_free : (upper + lower) / 2.0;

    SvmModel model;
    model.kernel = spec;
    model.C = C;
    model.bias = -rho;
    std::vector<int> sv;
    for (int t = 0; t < n; ++t) {
        if (alpha[t] > kAlphaKeep) sv.push_back(t);
    }
    model.support_vectors.resize(static_cast<Eigen::Index>(sv.size()), data.features.cols());
    model.dual_coefs.resize(static_cast<Eigen::Index>(sv.size()));
    for (std::size_t k = 0; k < sv.size(); ++k) {
        model.support_vectors.row(static_cast<Eigen::Index>(k)) = data.features.row(sv[k]);
        model.dual_coefs[static_cast<Eigen::Index>(k)] = y[sv[k]] * alpha[sv[k]];
    }
    return model;
}

double decision_function(const SvmModel& model, const FeatureVector& x) {
    if (x.size() != model.support_vectors.cols()) {
        throw ValidationError("input dimension does not match model");
    }
    double sum = model.bias;
    for (Eigen::Index i = 0; i < model.support_vectors.rows(); ++i) {
        sum += model.dual_coefs[i] *
               kernel_eval(model.kernel, model.support_vectors.row(i), x);
    }
    return sum;
}

int predict(const SvmModel& model, const FeatureVector& x) {
    return decision_function(model, x) > 0.0 ? 1 : 0;
}

double accuracy(const SvmModel& model, const Dataset& data) {
    if (data.n_samples() == 0) throw ValidationError("accuracy needs a nonempty dataset");
    int hits = 0;
    for (int i = 0; i < data.n_samples(); ++i) {
        if (predict(model, data.features.row(i)) == data.labels[i]) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(data.n_samples());
}

double dual_objective(const SvmModel& model) {
    const Eigen::Index m = model.dual_coefs.size();
    double obj = model.dual_coefs.cwiseAbs().sum(); // sum of alphas
    for (Eigen::Index i = 0; i < m; ++i) {
        for (Eigen::Index j = 0; j < m; ++j) {
            obj -= 0.5 * model.dual_coefs[i] * model.dual_coefs[j] *
                   kernel_eval(model.kernel, model.support_vectors.row(i),
                               model.support_vectors.row(j));
        }
    }
    return obj;
}

KernelSpec select_kernel(const Dataset& train, const Dataset& test,
                         const std::vector<KernelSpec>& candidates, double C) {
    if (candidates.empty()) throw ValidationError("kernel selection needs candidates");
    int best = 0;
    double best_acc = -1.0;
    for (std::size_t k = 0; k < candidates.size(); ++k) {
        const SvmModel model = fit_svm(train, candidates[k], C);
        const double acc = accuracy(model, test);
        if (acc > best_acc) {
            best_acc = acc;
            best = static_cast<int>(k);
        }
    }
    return candidates[static_cast<std::size_t>(best)];
}

namespace {

nlohmann::json kernel_to_json_obj(const KernelSpec& spec) {
    nlohmann::json j;
    j["kind"] = to_string(spec.kind);
    j["gamma_auto"] = spec.gamma_auto;
    j["gamma"] = spec.gamma;
    j["degree"] = spec.degree;
    j["coef0"] = spec.coef0;
    return j;
}

KernelSpec kernel_from_json_obj(const nlohmann::json& j) {
    KernelSpec spec;
    spec.kind = kernel_kind_from_string(j.at("kind").get<std::string>());
    spec.gamma_auto = j.value("gamma_auto", true);
    spec.gamma = j.value("gamma", 0.0);
    spec.degree = j.value("degree", 3);
    spec.coef0 = j.value("coef0", 0.0);
    return spec;
}

} // namespace

std::string svm_to_json(const SvmModel& model) {
    nlohmann::json j;
    j["kernel"] = kernel_to_json_obj(model.kernel);
    j["C"] = model.C;
    j["bias"] = model.bias;
    auto svs = nlohmann::json::array();
    for (Eigen::Index i = 0; i < model.support_vectors.rows(); ++i) {
        svs.push_back(std::vector<double>(model.support_vectors.row(i).begin(),
                                          model.support_vectors.row(i).end()));
    }
    j["support_vectors"] = std::move(svs);
    j["dual_coefs"] = std::vector<double>(model.dual_coefs.begin(), model.dual_coefs.end());
    return j.dump(2);
}

SvmModel svm_from_json(const std::string& text) {
    try {
        const nlohmann::json j = nlohmann::json::parse(text);
        SvmModel model;
        model.kernel = kernel_from_json_obj(j.at("kernel"));
        model.C = j.at("C").get<double>();
        model.bias = j.at("bias").get<double>();
        const auto svs = j.at("support_vectors");
        const auto coefs = j.at("dual_coefs").get<std::vector<double>>();
        if (svs.size() != coefs.size()) {
            throw ValidationError("support vector and dual coefficient counts differ");
        }
        if (svs.empty()) throw DegenerateModelError("model has no support vectors");
        const auto first = svs[0].get<std::vector<double>>();
        model.support_vectors.resize(static_cast<Eigen::Index>(svs.size()),
                                     static_cast<Eigen::Index>(first.size()));
        model.dual_coefs.resize(static_cast<Eigen::Index>(coefs.size()));
        for (std::size_t i = 0; i < svs.size(); ++i) {
            const auto row = svs[i].get<std::vector<double>>();
            if (row.size() != first.size()) {
                throw ValidationError("support vectors differ in dimension");
            }
            for (std::size_t c = 0; c < row.size(); ++c) {
                model.support_vectors(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) =
                    row[c];
            }
            model.dual_coefs[static_cast<Eigen::Index>(i)] = coefs[i];
        }
        return model;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("invalid model JSON: ") + e.what());
    }
}

} // namespace qaccel
