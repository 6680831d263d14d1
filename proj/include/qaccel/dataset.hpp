#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qaccel/common.hpp"

namespace qaccel {

// Tabular sample matrix with binary labels and per-sample drive ownership.
// drive_ids let splitters keep every drive's samples in one partition.
struct Dataset {
    Eigen::MatrixXd features; // n_samples x n_features
    Eigen::VectorXi labels;   // entries in {0, 1}
    std::vector<std::string> drive_ids;
    std::vector<std::string> feature_names;

    int n_samples() const { return static_cast<int>(features.rows()); }
    int n_features() const { return static_cast<int>(features.cols()); }

    // Checks row-count agreement, finiteness and binary labels.
    void validate() const;
};

// New dataset holding the given rows, in the given order.
Dataset select_rows(const Dataset& data, const std::vector<int>& rows);

// New dataset holding the given feature columns, in the given order.
Dataset select_columns(const Dataset& data, const std::vector<int>& columns);

// Seeded class-stratified row subset of (up to) `want` rows: an even split
// between the two classes, spilling over when one class runs short. Rows
// keep their original ascending order; want >= n_samples returns the whole
// dataset. Requires both classes present.
Dataset stratified_subsample(const Dataset& data, int want, std::uint64_t seed);

// Per-feature min-max scaler mapping the fitted range onto [0, pi].
// Constant columns map to 0; out-of-range inputs (e.g. validation data under
// training statistics) are clamped into [0, pi].
struct Scaler {
    Eigen::VectorXd min;
    Eigen::VectorXd max;

    static Scaler fit(const Dataset& data);
    Dataset transform(const Dataset& data) const;
};

std::string scaler_to_json(const Scaler& scaler);
Scaler scaler_from_json(const std::string& text);

} // namespace qaccel
