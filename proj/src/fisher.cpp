#include "qaccel/fisher.hpp"

#include <algorithm>
#include <numeric>

namespace qaccel {

FeatureRanking fisher_score(const Dataset& data) {
    data.validate();
    const int n = data.n_samples();
    const int m = data.n_features();
    if (n == 0 || m == 0) throw ValidationError("fisher score needs a nonempty dataset");

    std::vector<int> class_rows[2];
    for (int i = 0; i < n; ++i) class_rows[data.labels[i]].push_back(i);
    if (class_rows[0].empty() || class_rows[1].empty()) {
        throw ValidationError("fisher score needs samples from both classes");
    }

    constexpr double kEps = 1e-12;
    const Eigen::RowVectorXd overall_mean = data.features.colwise().mean();

    FeatureRanking ranking;
    ranking.scores = Eigen::VectorXd::Zero(m);
    Eigen::RowVectorXd numerator = Eigen::RowVectorXd::Zero(m);
    Eigen::RowVectorXd denominator = Eigen::RowVectorXd::Constant(m, kEps);
    for (int c = 0; c < 2; ++c) {
        const auto& rows = class_rows[c];
        const double n_c = static_cast<double>(rows.size());
        Eigen::RowVectorXd mean = Eigen::RowVectorXd::Zero(m);
        for (int r : rows) mean += data.features.row(r);
        mean /= n_c;
        Eigen::RowVectorXd var = Eigen::RowVectorXd::Zero(m);
        for (int r : rows) {
            var += (data.features.row(r) - mean).array().square().matrix();
        }
        var /= n_c; // population variance
        numerator += n_c * (mean - overall_mean).array().square().matrix();
        denominator += n_c * var;
    }
    ranking.scores = (numerator.array() / denominator.array()).transpose();

    ranking.order.resize(static_cast<std::size_t>(m));
    std::iota(ranking.order.begin(), ranking.order.end(), 0);
    std::stable_sort(ranking.order.begin(), ranking.order.end(), [&](int a, int b) {
        if (ranking.scores[a] != ranking.scores[b]) return ranking.scores[a] > ranking.scores[b];
        return a < b;
    });
    return ranking;
}

std::vector<int> select_top_k(const FeatureRanking& ranking, int k) {
    const int m = static_cast<int>(ranking.order.size());
    if (k < 1 || k > m) {
        throw ValidationError("k must lie in [1, " + std::to_string(m) + "]");
    }
    return std::vector<int>(ranking.order.begin(), ranking.order.begin() + k);
}

std::string ranking_to_csv(const FeatureRanking& ranking,
                           const std::vector<std::string>& feature_names) {
    const std::size_t m = ranking.order.size();
    if (!feature_names.empty() && feature_names.size() != m) {
        throw ValidationError("feature name count does not match ranking size");
    }
    std::string out = "feature_name,score,rank\n";
    for (std::size_t rank = 0; rank < m; ++rank) {
        const int j = ranking.order[rank];
        const std::string name =
            feature_names.empty() ? "f" + std::to_string(j) : feature_names[static_cast<std::size_t>(j)];
        out += name;
        out += ',';
        out += double_repr(ranking.scores[j]);
        out += ',';
        out += std::to_string(rank + 1);
        out += '\n';
    }
    return out;
}

} // namespace qaccel
