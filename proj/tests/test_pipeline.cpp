#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "qaccel/fisher.hpp"
#include "qaccel/pipeline.hpp"

using namespace qaccel;

namespace {

const char* kTinyCsv =
    "drive_id,timestamp,seat_heating,temp,humidity\n"
    "a,0,1,21.5,0.4\n"
    "a,5,1,21.6,0.41\n"
    "b,100,0,18.0,0.6\n"
    "b,105,0,18.1,0.61\n";

int count_majority_on(const DriveSet& set) {
    int on = 0;
    for (const Drive& d : set.drives) on += majority_vote(d);
    return on;
}

} // namespace

TEST_CASE("header-only csv yields an empty drive set") {
    const DriveSet set = ingest_csv_text("drive_id,timestamp,seat_heating,f0\n");
    CHECK(set.drives.empty());
    CHECK(set.feature_names == std::vector<std::string>{"f0"});
    CHECK_THROWS_AS(preprocess(set), ValidationError);
}

TEST_CASE("csv rows group into drives") {
    const DriveSet set = ingest_csv_text(kTinyCsv);
    REQUIRE(set.drives.size() == 2);
    CHECK(set.feature_names == std::vector<std::string>{"temp", "humidity"});
    CHECK(set.drives[0].drive_id == "a");
    CHECK(set.drives[0].samples.size() == 2);
    CHECK(set.drives[1].drive_id == "b");
    CHECK(set.drives[1].samples[0].timestamp == 100);
    CHECK(set.drives[1].samples[0].features(0) == doctest::Approx(18.0));
}

TEST_CASE("bad header or missing file raise") {
    CHECK_THROWS_AS(ingest_csv_text(""), ValidationError);
    CHECK_THROWS_AS(ingest_csv_text("time,state\n"), ValidationError);
    CHECK_THROWS_AS(ingest_csv("/nonexistent/path.csv"), ValidationError);
}

TEST_CASE("non-numeric cells flag the sample instead of aborting the ingest") {
    const DriveSet set = ingest_csv_text(
        "drive_id,timestamp,seat_heating,temp\n"
        "a,0,1,21.5\n"
        "a,5,1,oops\n"
        "a,10,not_a_state,21.7\n"
        "a,15,1\n"
        "a,20,1,21.9\n");
    REQUIRE(set.drives.size() == 1);
    const Drive& d = set.drives[0];
    REQUIRE(d.samples.size() == 5);
    int valid = 0;
    for (const DriveSample& s : d.samples) valid += s.valid ? 1 : 0;
    CHECK(valid == 2);
    const Dataset data = preprocess(set);
    CHECK(data.n_samples() == 2);
}

TEST_CASE("duplicate timestamps keep the first occurrence") {
    const DriveSet set = ingest_csv_text(
        "drive_id,timestamp,seat_heating,temp\n"
        "a,5,1,1.0\n"
        "a,0,1,2.0\n"
        "a,5,1,3.0\n");
    const Drive& d = set.drives[0];
    REQUIRE(d.samples.size() == 3);
    // Sorted by timestamp; the repeated t=5 row that came first survives.
    CHECK(d.samples[0].timestamp == 0);
    CHECK(d.samples[1].valid);
    CHECK(d.samples[1].features(0) == doctest::Approx(1.0));
    CHECK(!d.samples[2].valid);
}

TEST_CASE("elapsed minutes start at zero per drive") {
    const Dataset data = preprocess(ingest_csv_text(kTinyCsv));
    REQUIRE(data.n_samples() == 4);
    const int elapsed_col = 2 + 2; // two raw features, then hour_sin hour_cos elapsed_min
    CHECK(data.feature_names[static_cast<std::size_t>(elapsed_col)] == "elapsed_min");
    CHECK(data.features(0, elapsed_col) == doctest::Approx(0.0));
    CHECK(data.features(1, elapsed_col) == doctest::Approx(5.0 / 60.0));
    CHECK(data.features(2, elapsed_col) == doctest::Approx(0.0));
    CHECK(data.features(3, elapsed_col) == doctest::Approx(5.0 / 60.0));
}

TEST_CASE("hour phase distinguishes morning from evening") {
    // 06:00 and 18:00 are half a day apart: sine flips, cosine matches.
    const DriveSet set = ingest_csv_text(
        "drive_id,timestamp,seat_heating,f0\n"
        "a,21600,1,1.0\n"
        "b,64800,0,1.0\n"
        "c,21600,1,1.0\n");
    const Dataset data = preprocess(set);
    const int sin_col = 1;
    const int cos_col = 2;
    CHECK(data.feature_names[1] == "hour_sin");
    CHECK(data.features(0, sin_col) == doctest::Approx(1.0));
    CHECK(std::abs(data.features(0, sin_col) + data.features(1, sin_col)) < 1e-12);
    CHECK(std::abs(data.features(0, cos_col) - data.features(1, cos_col)) < 1e-12);
}

TEST_CASE("week phase separates weekdays") {
    const std::int64_t day = 86400;
    const DriveSet set = ingest_csv_text(
        "drive_id,timestamp,seat_heating,f0\n"
        "a," + std::to_string(day) + ",1,1.0\n"
        "b," + std::to_string(3 * day) + ",0,1.0\n"
        "c,0,1,1.0\n");
    const Dataset data = preprocess(set);
    CHECK(data.feature_names[4] == "week_sin");
    CHECK(data.feature_names[5] == "week_cos");
    CHECK(data.features(2, 4) == doctest::Approx(0.0));
    CHECK(data.features(2, 5) == doctest::Approx(1.0));
    CHECK(data.features(0, 4) == doctest::Approx(std::sin(2.0 * M_PI / 7.0)));
    CHECK(data.features(1, 5) == doctest::Approx(std::cos(2.0 * M_PI * 3.0 / 7.0)));
}

TEST_CASE("majority vote labels a drive by its dominant state") {
    Drive d;
    d.drive_id = "x";
    const auto sample = [](std::int64_t t, int state, bool valid = true) {
        DriveSample s;
        s.timestamp = t;
        s.seat_heating = state;
        s.features = Eigen::VectorXd::Zero(1);
        s.valid = valid;
        return s;
    };
    d.samples = {sample(0, 1), sample(5, 1), sample(10, 1), sample(15, 0), sample(20, 0)};
    CHECK(majority_vote(d) == 1);
    d.samples = {sample(0, 1), sample(5, 1), sample(10, 0), sample(15, 0)};
    CHECK(majority_vote(d) == 0); // exact tie is not a strict majority
    d.samples = {sample(0, 0), sample(5, 0)};
    CHECK(majority_vote(d) == 0);
    // Invalid samples do not vote.
    d.samples = {sample(0, 1), sample(5, 0, false), sample(10, 0, false)};
    CHECK(majority_vote(d) == 1);
    d.samples = {sample(0, 1, false)};
    CHECK_THROWS_AS(majority_vote(d), ValidationError);
}

TEST_CASE("scaler maps the fitted range onto the feature-map domain") {
    Dataset d;
    d.features.resize(3, 2);
    d.features << 0.0, 5.0,
                  1.0, 5.0,
                  2.0, 5.0;
    d.labels.resize(3);
    d.labels << 0, 1, 0;
    d.feature_names = {"a", "b"};
    const Scaler scaler = Scaler::fit(d);
    const Dataset t = scaler.transform(d);
    CHECK(t.features(0, 0) == doctest::Approx(0.0));
    CHECK(t.features(1, 0) == doctest::Approx(M_PI / 2));
    CHECK(t.features(2, 0) == doctest::Approx(M_PI));
    // Constant columns collapse to zero.
    for (int r = 0; r < 3; ++r) CHECK(t.features(r, 1) == doctest::Approx(0.0));

    // Out-of-range inputs clamp into [0, pi].
    Dataset wild = d;
    wild.features(0, 0) = -10.0;
    wild.features(1, 0) = 99.0;
    const Dataset c = scaler.transform(wild);
    CHECK(c.features(0, 0) == doctest::Approx(0.0));
    CHECK(c.features(1, 0) == doctest::Approx(M_PI));

    const Scaler back = scaler_from_json(scaler_to_json(scaler));
    CHECK((back.min - scaler.min).cwiseAbs().maxCoeff() == 0.0);
    CHECK((back.max - scaler.max).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("ten drives split eight one one") {
    SyntheticConfig cfg;
    cfg.n_drives = 10;
    cfg.n_on_drives = 5;
    cfg.n_features = 7;
    cfg.min_samples_per_drive = 10;
    cfg.max_samples_per_drive = 20;
    cfg.seed = 3;
    const Dataset data = preprocess(generate_synthetic(cfg));
    SplitSpec spec;
    spec.seed = 9;
    const SplitResult split = split_by_drive(data, spec);
    CHECK(split.train_drives.size() == 8);
    CHECK(split.test_drives.size() == 1);
    CHECK(split.validation_drives.size() == 1);
    CHECK(split.train.n_samples() + split.test.n_samples() + split.validation.n_samples() ==
          data.n_samples());
}

TEST_CASE("partitions never share a drive") {
    SyntheticConfig cfg;
    cfg.n_drives = 13;
    cfg.n_on_drives = 6;
    cfg.n_features = 7;
    cfg.min_samples_per_drive = 5;
    cfg.max_samples_per_drive = 9;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        cfg.seed = seed;
        const Dataset data = preprocess(generate_synthetic(cfg));
        SplitSpec spec;
        spec.seed = 1000 + seed;
        const SplitResult split = split_by_drive(data, spec);
        std::set<std::string> seen;
        std::size_t total = 0;
        for (const auto* ids :
             {&split.train_drives, &split.test_drives, &split.validation_drives}) {
            for (const std::string& id : *ids) seen.insert(id);
            total += ids->size();
        }
        CHECK(seen.size() == total); // no drive appears twice
        CHECK(total == 13);
        // Row-level check: the partition datasets honor the manifest.
        for (const std::string& id : split.test_drives) {
            CHECK(std::find(split.train.drive_ids.begin(), split.train.drive_ids.end(), id) ==
                  split.train.drive_ids.end());
        }
    }
}

TEST_CASE("splits are reproducible and honor the seed") {
    const Dataset data = preprocess(ingest_csv_text(kTinyCsv + std::string("c,7,1,20.0,0.5\n")));
    SplitSpec spec;
    spec.train = 0.34;
    spec.test = 0.33;
    spec.validation = 0.33;
    spec.seed = 5;
    const SplitResult a = split_by_drive(data, spec);
    const SplitResult b = split_by_drive(data, spec);
    CHECK(a.train_drives == b.train_drives);
    CHECK(a.test_drives == b.test_drives);
    CHECK(a.validation_drives == b.validation_drives);
    CHECK(split_manifest_json(a) == split_manifest_json(b));
}

TEST_CASE("split validation") {
    const Dataset data = preprocess(ingest_csv_text(kTinyCsv));
    SplitSpec bad;
    bad.train = 0.9;
    bad.test = 0.15;
    bad.validation = 0.05; // sums to 1.1
    CHECK_THROWS_AS(split_by_drive(data, bad), ValidationError);
    SplitSpec low;
    low.train = 0.5;
    low.test = 0.1;
    low.validation = 0.1;
    CHECK_THROWS_AS(split_by_drive(data, low), ValidationError);
    SplitSpec ok;
    // Two drives cannot fill three partitions.
    CHECK_THROWS_AS(split_by_drive(data, ok), ValidationError);
}

TEST_CASE("manifest lists every partition") {
    SyntheticConfig cfg;
    cfg.n_drives = 6;
    cfg.n_on_drives = 3;
    cfg.n_features = 7;
    cfg.min_samples_per_drive = 4;
    cfg.max_samples_per_drive = 6;
    cfg.seed = 44;
    const Dataset data = preprocess(generate_synthetic(cfg));
    SplitSpec spec;
    spec.train = 0.5;
    spec.test = 0.25;
    spec.validation = 0.25;
    spec.seed = 7;
    const SplitResult split = split_by_drive(data, spec);
    const std::string manifest = split_manifest_json(split);
    CHECK(manifest.find("\"train\"") != std::string::npos);
    CHECK(manifest.find("\"test\"") != std::string::npos);
    CHECK(manifest.find("\"validation\"") != std::string::npos);
}

TEST_CASE("synthetic generator matches the fleet-scale defaults") {
    SyntheticConfig cfg;
    cfg.seed = 2;
    const DriveSet set = generate_synthetic(cfg);
    CHECK(set.drives.size() == 79);
    CHECK(count_majority_on(set) == 27);
    const Dataset data = preprocess(set);
    CHECK(data.n_features() == 121);
    // Expected fleet volume: 79 drives x ~259 samples each.
    CHECK(data.n_samples() > static_cast<int>(20458 * 0.95));
    CHECK(data.n_samples() < static_cast<int>(20458 * 1.05));
}

TEST_CASE("generated drives differ but reproduce per seed") {
    SyntheticConfig cfg;
    cfg.n_drives = 5;
    cfg.n_on_drives = 2;
    cfg.n_features = 7;
    cfg.min_samples_per_drive = 3;
    cfg.max_samples_per_drive = 5;
    cfg.seed = 12;
    const DriveSet a = generate_synthetic(cfg);
    const DriveSet b = generate_synthetic(cfg);
    CHECK(drives_to_csv(a) == drives_to_csv(b));
    cfg.seed = 13;
    CHECK(drives_to_csv(a) != drives_to_csv(generate_synthetic(cfg)));
}

TEST_CASE("csv export round-trips through the ingester") {
    SyntheticConfig cfg;
    cfg.n_drives = 4;
    cfg.n_on_drives = 2;
    cfg.n_features = 7;
    cfg.min_samples_per_drive = 3;
    cfg.max_samples_per_drive = 5;
    cfg.seed = 31;
    const DriveSet original = generate_synthetic(cfg);
    const std::string csv = drives_to_csv(original);
    const DriveSet back = ingest_csv_text(csv);
    CHECK(drives_to_csv(back) == csv);
    const Dataset d1 = preprocess(original);
    const Dataset d2 = preprocess(back);
    CHECK((d1.features - d2.features).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((d1.labels - d2.labels).cwiseAbs().maxCoeff() == 0);
}

TEST_CASE("informative columns carry the class signal") {
    SyntheticConfig cfg;
    cfg.seed = 6;
    const Dataset data = preprocess(generate_synthetic(cfg));
    const FeatureRanking ranking = fisher_score(data);
    std::vector<int> top = select_top_k(ranking, 2);
    std::sort(top.begin(), top.end());
    CHECK(top == std::vector<int>{0, 1});
}

TEST_CASE("generator validation") {
    SyntheticConfig cfg;
    cfg.n_on_drives = 100;
    CHECK_THROWS_AS(generate_synthetic(cfg), ValidationError);
    cfg = SyntheticConfig{};
    cfg.n_features = 5; // no room for raw features next to the 5 context ones
    CHECK_THROWS_AS(generate_synthetic(cfg), ValidationError);
    cfg = SyntheticConfig{};
    cfg.min_samples_per_drive = 10;
    cfg.max_samples_per_drive = 5;
    CHECK_THROWS_AS(generate_synthetic(cfg), ValidationError);
    cfg = SyntheticConfig{};
    cfg.state_flip_prob = 1.5;
    CHECK_THROWS_AS(generate_synthetic(cfg), ValidationError);
}
