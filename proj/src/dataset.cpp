#include "qaccel/dataset.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

namespace qaccel {

void Dataset::validate() const {
    const int n = n_samples();
    if (labels.size() != n) throw ValidationError("label count does not match sample count");
    if (static_cast<int>(drive_ids.size()) != n) {
        throw ValidationError("drive_id count does not match sample count");
    }
    if (!feature_names.empty() && static_cast<int>(feature_names.size()) != n_features()) {
        throw ValidationError("feature_name count does not match feature count");
    }
    for (int i = 0; i < n; ++i) {
        if (labels[i] != 0 && labels[i] != 1) {
            throw ValidationError("labels must be 0 or 1");
        }
    }
    if (!features.allFinite()) throw ValidationError("features contain NaN or infinity");
}

Dataset select_rows(const Dataset& data, const std::vector<int>& rows) {
    Dataset out;
    out.features.resize(static_cast<Eigen::Index>(rows.size()), data.features.cols());
    out.labels.resize(static_cast<Eigen::Index>(rows.size()));
    out.drive_ids.reserve(rows.size());
    out.feature_names = data.feature_names;
    Eigen::Index r = 0;
    for (int row : rows) {
        if (row < 0 || row >= data.n_samples()) throw ValidationError("row index out of range");
        out.features.row(r) = data.features.row(row);
        out.labels[r] = data.labels[row];
        out.drive_ids.push_back(data.drive_ids[static_cast<std::size_t>(row)]);
        ++r;
    }
    return out;
}

Dataset select_columns(const Dataset& data, const std::vector<int>& columns) {
    Dataset out;
    out.features.resize(data.features.rows(), static_cast<Eigen::Index>(columns.size()));
    out.labels = data.labels;
    out.drive_ids = data.drive_ids;
    Eigen::Index c = 0;
    for (int col : columns) {
        if (col < 0 || col >= data.n_features()) throw ValidationError("column index out of range");
        out.features.col(c) = data.features.col(col);
        if (!data.feature_names.empty()) {
            out.feature_names.push_back(data.feature_names[static_cast<std::size_t>(col)]);
        }
        ++c;
    }
    return out;
}

Dataset stratified_subsample(const Dataset& data, int want, std::uint64_t seed) {
    data.validate();
    if (want < 2) throw ValidationError("subsample size must be >= 2");
    std::vector<int> by_class[2];
    for (int i = 0; i < data.n_samples(); ++i) {
        by_class[data.labels[i]].push_back(i);
    }
    if (by_class[0].empty() || by_class[1].empty()) {
        throw ValidationError("stratified subsample needs both classes present");
    }
    if (want >= data.n_samples()) return data;
    Rng rng(seed);
    for (auto& rows : by_class) {
        for (std::size_t i = rows.size() - 1; i > 0; --i) {
            const std::size_t j = rng.below(i + 1);
            std::swap(rows[i], rows[j]);
        }
    }
    // Half per class; whichever class runs short spills into the other.
    int take1 = std::min<int>(static_cast<int>(by_class[1].size()), want / 2);
    const int take0 = std::min<int>(static_cast<int>(by_class[0].size()), want - take1);
    take1 = std::min<int>(static_cast<int>(by_class[1].size()), want - take0);
    std::vector<int> chosen(by_class[0].begin(), by_class[0].begin() + take0);
    chosen.insert(chosen.end(), by_class[1].begin(), by_class[1].begin() + take1);
    std::sort(chosen.begin(), chosen.end());
    return select_rows(data, chosen);
}

Scaler Scaler::fit(const Dataset& data) {
    if (data.n_samples() == 0) throw ValidationError("cannot fit scaler on empty dataset");
    Scaler s;
    s.min = data.features.colwise().minCoeff();
    s.max = data.features.colwise().maxCoeff();
    return s;
}

Dataset Scaler::transform(const Dataset& data) const {
    if (data.n_features() != static_cast<int>(min.size())) {
        throw ValidationError("scaler was fitted on a different feature count");
    }
    Dataset out = data;
    for (Eigen::Index j = 0; j < out.features.cols(); ++j) {
        const double lo = min[j];
        const double span = max[j] - lo;
        for (Eigen::Index i = 0; i < out.features.rows(); ++i) {
            double v = span > 0.0 ? (out.features(i, j) - lo) / span * kPi : 0.0;
            out.features(i, j) = std::clamp(v, 0.0, kPi);
        }
    }
    return out;
}

std::string scaler_to_json(const Scaler& scaler) {
    nlohmann::json j;
    j["min"] = std::vector<double>(scaler.min.begin(), scaler.min.end());
    j["max"] = std::vector<double>(scaler.max.begin(), scaler.max.end());
    return j.dump(2);
}

Scaler scaler_from_json(const std::string& text) {
    try {
        nlohmann::json j = nlohmann::json::parse(text);
        auto mins = j.at("min").get<std::vector<double>>();
        auto maxs = j.at("max").get<std::vector<double>>();
        if (mins.size() != maxs.size()) throw ValidationError("scaler min/max length mismatch");
        Scaler s;
        s.min = Eigen::Map<Eigen::VectorXd>(mins.data(), static_cast<Eigen::Index>(mins.size()));
        s.max = Eigen::Map<Eigen::VectorXd>(maxs.data(), static_cast<Eigen::Index>(maxs.size()));
        return s;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("invalid scaler JSON: ") + e.what());
    }
}

} // namespace qaccel
