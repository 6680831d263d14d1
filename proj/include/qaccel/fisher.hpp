#pragma once

#include "qaccel/dataset.hpp"

namespace qaccel {

// Per-feature Fisher scores plus the induced descending-score ordering.
// Ties order by ascending feature index.
struct FeatureRanking {
    Eigen::VectorXd scores;
    std::vector<int> order;
};

// Two-class Fisher criterion per feature j:
//   F_j = sum_c n_c (mu_cj - mu_j)^2 / (sum_c n_c var_cj + eps)
// with population (biased) within-class variances and eps = 1e-12 guarding
// constant-within-class features. Requires both classes present.
FeatureRanking fisher_score(const Dataset& data);

// First k indices of ranking.order; k must lie in [1, n_features].
std::vector<int> select_top_k(const FeatureRanking& ranking, int k);

// CSV export: feature_name,score,rank (rank 1 = highest score).
std::string ranking_to_csv(const FeatureRanking& ranking,
                           const std::vector<std::string>& feature_names);

} // namespace qaccel
