#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qaccel/dataset.hpp"

namespace qaccel {

// One telemetry row as ingested. Rows that failed numeric parsing (or carry
// a duplicate timestamp) stay in the drive with valid=false until preprocess
// drops them, so cleaning statistics remain inspectable.
struct DriveSample {
    std::int64_t timestamp = 0; // epoch seconds; drives sample every 5 s
    int seat_heating = 0;       // 1 = on, 0 = off
    Eigen::VectorXd features;
    bool valid = true;
};

// One vehicle trip: atomic unit for labeling and splitting.
struct Drive {
    std::string drive_id;
    std::vector<DriveSample> samples; // time-ordered after ingestion
};

struct DriveSet {
    std::vector<Drive> drives;
    std::vector<std::string> feature_names; // raw feature columns only
};

// CSV schema: header "drive_id,timestamp,seat_heating,<feature columns...>".
// Rows are grouped by drive_id and sorted by timestamp; rows with malformed
// numeric cells or duplicated timestamps are kept but flagged invalid.
// Missing mandatory columns or an unreadable file throw ValidationError.
DriveSet ingest_csv(const std::string& path);
DriveSet ingest_csv_text(const std::string& text);

// Writes the schema above; seat_heating rendered as "on"/"off".
std::string drives_to_csv(const DriveSet& set);
void write_csv(const DriveSet& set, const std::string& path);

// 1 iff strictly more than half of the valid samples have the heater on;
// exact tie resolves to 0 (heater stays off). Throws on drives with no
// valid samples.
int majority_vote(const Drive& drive);

// Names of the five context features preprocess appends after the raw
// columns: hour-of-day sin/cos, minutes since drive start, week-phase
// sin/cos (period 7 days, phase anchored at the epoch).
const std::vector<std::string>& augmented_feature_names();

// Drops invalid rows, appends the five context features, and labels every
// sample with its drive's majority vote. Output features are UNSCALED;
// fit a Scaler on the training split only (see split_by_drive) and apply it
// to all partitions so validation statistics never leak into scaling.
// Drives whose rows are all invalid are dropped; an entirely empty result
// throws ValidationError.
Dataset preprocess(const DriveSet& set);

// Fractions apply to drives, not samples. They must be positive and sum to
// 1 (a sum below 1 leaves drives unassigned and is rejected, as is a sum
// above 1).
struct SplitSpec {
    double train = 0.8;
    double test = 0.1;
    double validation = 0.1;
    std::uint64_t seed = 0;
};

struct SplitResult {
    Dataset train;
    Dataset test;
    Dataset validation;
    std::vector<std::string> train_drives;
    std::vector<std::string> test_drives;
    std::vector<std::string> validation_drives;
};

// Shuffles drives with the spec seed and partitions them by fractions
// (largest-remainder rounding), so every drive's samples land wholly in one
// partition. A partition that would receive zero drives is an error.
SplitResult split_by_drive(const Dataset& data, const SplitSpec& spec);

// Reproducibility manifest: drive_id lists per partition, as JSON.
std::string split_manifest_json(const SplitResult& split);

// Synthetic stand-in for the proprietary telemetry corpus. n_features
// counts the FINAL dataset width (raw columns + the 5 augmented context
// features), so the generator emits n_features - 5 raw columns. The first
// n_informative raw columns are drawn from class-conditional Gaussians
// N(0,1) vs N(separation,1); all other columns are label-independent N(0,1).
struct SyntheticConfig {
    int n_drives = 79;
    int n_on_drives = 27;
    int n_features = 121;
    int n_informative = 2;
    double separation = 2.0;
    int min_samples_per_drive = 180;
    int max_samples_per_drive = 338; // mean 259 -> ~20,461 samples total
    double state_flip_prob = 0.1;    // per-sample heater-state noise
    std::uint64_t seed = 0;
};

DriveSet generate_synthetic(const SyntheticConfig& cfg);

} // namespace qaccel
