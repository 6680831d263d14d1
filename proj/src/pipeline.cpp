#include "qaccel/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

namespace qaccel {

namespace {

constexpr std::uint64_t kSplitStream = 0x73706c69;  // "spli"
constexpr std::uint64_t kAssignStream = 0x61736767; // "asgg"
constexpr std::uint64_t kDriveStream = 0x64727633;  // "drv3"

constexpr std::int64_t kDaySeconds = 86400;
constexpr std::int64_t kWeekSeconds = 7 * kDaySeconds;

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur.push_back(ch);
        }
    }
    fields.push_back(cur);
    return fields;
}

bool parse_double(const std::string& s, double& out) {
    const char* begin = s.data();
    const char* end = begin + s.size();
    auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc{} && ptr == end && std::isfinite(out);
}

bool parse_int64(const std::string& s, std::int64_t& out) {
    const char* begin = s.data();
    const char* end = begin + s.size();
    auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc{} && ptr == end;
}

bool parse_state(const std::string& s, int& out) {
    if (s == "on" || s == "1") { out = 1; return true; }
    if (s == "off" || s == "0") { out = 0; return true; }
    return false;
}

// Positive remainder so pre-epoch timestamps still land in [0, modulus).
std::int64_t floor_mod(std::int64_t value, std::int64_t modulus) {
    std::int64_t r = value % modulus;
    return r < 0 ? r + modulus : r;
}

} // namespace

DriveSet ingest_csv_text(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw ValidationError("CSV file is empty (missing header)");
    const std::vector<std::string> header = split_fields(line);
    if (header.size() < 3 || header[0] != "drive_id" || header[1] != "timestamp" ||
        header[2] != "seat_heating") {
        throw ValidationError(
            "CSV header must start with drive_id,timestamp,seat_heating");
    }
    DriveSet set;
    set.feature_names.assign(header.begin() + 3, header.end());
    const std::size_t n_features = set.feature_names.size();

    std::map<std::string, std::size_t> drive_index; // id -> position in set.drives
    auto drive_for = [&](const std::string& id) -> Drive& {
        auto [it, inserted] = drive_index.try_emplace(id, set.drives.size());
        if (inserted) {
            set.drives.push_back(Drive{id, {}});
        }
        return set.drives[it->second];
    };

    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        const std::vector<std::string> fields = split_fields(line);
        if (fields[0].empty()) continue; // row without a drive id is unattributable
        Drive& drive = drive_for(fields[0]);
        DriveSample sample;
        sample.features = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n_features));
        sample.valid = fields.size() == header.size();
        if (sample.valid) {
            sample.valid = parse_int64(fields[1], sample.timestamp) &&
                           parse_state(fields[2], sample.seat_heating);
        }
        if (sample.valid) {
            for (std::size_t f = 0; f < n_features; ++f) {
                double v = 0.0;
                if (!parse_double(fields[3 + f], v)) {
                    sample.valid = false;
                    break;
                }
                sample.features[static_cast<Eigen::Index>(f)] = v;
            }
        }
        drive.samples.push_back(std::move(sample));
    }

    for (Drive& drive : set.drives) {
        std::stable_sort(drive.samples.begin(), drive.samples.end(),
                         [](const DriveSample& a, const DriveSample& b) {
                             return a.timestamp < b.timestamp;
                         });
        // A repeated timestamp within one drive violates the 5-second-period
        // model; keep the first occurrence and flag the rest invalid.
        for (std::size_t i = 1; i < drive.samples.size(); ++i) {
            if (drive.samples[i].valid && drive.samples[i - 1].valid &&
                drive.samples[i].timestamp == drive.samples[i - 1].timestamp) {
                drive.samples[i].valid = false;
            }
        }
    }
    return set;
}

DriveSet ingest_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open CSV file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return ingest_csv_text(buf.str());
}

std::string drives_to_csv(const DriveSet& set) {
    std::string out = "drive_id,timestamp,seat_heating";
    for (const std::string& name : set.feature_names) {
        out += ',';
        out += name;
    }
    out += '\n';
    for (const Drive& drive : set.drives) {
        for (const DriveSample& s : drive.samples) {
            out += drive.drive_id;
            out += ',';
            out += std::to_string(s.timestamp);
            out += ',';
            out += s.seat_heating ? "on" : "off";
            for (Eigen::Index f = 0; f < s.features.size(); ++f) {
                out += ',';
                out += double_repr(s.features[f]);
            }
            out += '\n';
        }
    }
    return out;
}

void write_csv(const DriveSet& set, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot open output file: " + path);
    out << drives_to_csv(set);
    if (!out) throw ValidationError("failed writing CSV to " + path);
}

int majority_vote(const Drive& drive) {
    int on = 0;
    int total = 0;
    for (const DriveSample& s : drive.samples) {
        if (!s.valid) continue;
        ++total;
        on += s.seat_heating;
    }
    if (total == 0) throw ValidationError("drive " + drive.drive_id + " has no valid samples");
    return 2 * on > total ? 1 : 0;
}

const std::vector<std::string>& augmented_feature_names() {
    static const std::vector<std::string> names = {
        "hour_sin", "hour_cos", "elapsed_min", "week_sin", "week_cos"};
    return names;
}

Dataset preprocess(const DriveSet& set) {
    const Eigen::Index n_raw = static_cast<Eigen::Index>(set.feature_names.size());
    const Eigen::Index n_aug = static_cast<Eigen::Index>(augmented_feature_names().size());

    std::size_t n_rows = 0;
    for (const Drive& drive : set.drives) {
        for (const DriveSample& s : drive.samples) {
            if (s.valid) ++n_rows;
        }
    }
    if (n_rows == 0) throw ValidationError("no valid samples after cleaning");

    Dataset data;
    data.features.resize(static_cast<Eigen::Index>(n_rows), n_raw + n_aug);
    data.labels.resize(static_cast<Eigen::Index>(n_rows));
    data.drive_ids.reserve(n_rows);
    data.feature_names = set.feature_names;
    for (const std::string& name : augmented_feature_names()) {
        data.feature_names.push_back(name);
    }

    Eigen::Index row = 0;
    for (const Drive& drive : set.drives) {
        bool any_valid = false;
        for (const DriveSample& s : drive.samples) {
            if (s.valid) { any_valid = true; break; }
        }
        if (!any_valid) continue;
        const int label = majority_vote(drive);
        std::int64_t start = 0;
        bool have_start = false;
        for (const DriveSample& s : drive.samples) {
            if (!s.valid) continue;
            if (!have_start) {
                start = s.timestamp;
                have_start = true;
            }
            if (s.features.size() != n_raw) {
                throw ValidationError("drive " + drive.drive_id +
                                      " has rows with inconsistent feature counts");
            }
            data.features.row(row).head(n_raw) = s.features;
            const double day_angle =
                2.0 * kPi * static_cast<double>(floor_mod(s.timestamp, kDaySeconds)) /
                static_cast<double>(kDaySeconds);
            const double week_angle =
                2.0 * kPi * static_cast<double>(floor_mod(s.timestamp, kWeekSeconds)) /
                static_cast<double>(kWeekSeconds);
            data.features(row, n_raw + 0) = std::sin(day_angle);
            data.features(row, n_raw + 1) = std::cos(day_angle);
            data.features(row, n_raw + 2) = static_cast<double>(s.timestamp - start) / 60.0;
            data.features(row, n_raw + 3) = std::sin(week_angle);
            data.features(row, n_raw + 4) = std::cos(week_angle);
            data.labels[row] = label;
            data.drive_ids.push_back(drive.drive_id);
            ++row;
        }
    }
    data.validate();
    return data;
}

SplitResult split_by_drive(const Dataset& data, const SplitSpec& spec) {
    data.validate();
    const double fractions[3] = {spec.train, spec.test, spec.validation};
    double sum = 0.0;
    for (double f : fractions) {
        if (!(f > 0.0)) throw ValidationError("split fractions must be positive");
        sum += f;
    }
    if (sum < 1.0 - 1e-9) {
        throw ValidationError("split fractions sum to less than 1, leaving drives unassigned");
    }
    if (sum > 1.0 + 1e-9) {
        throw ValidationError("split fractions sum to more than 1");
    }

    // Unique drives in first-appearance order, with their row indices.
    std::vector<std::string> ids;
    std::vector<std::vector<int>> rows_of;
    std::map<std::string, std::size_t> index_of;
    for (int r = 0; r < data.n_samples(); ++r) {
        const std::string& id = data.drive_ids[static_cast<std::size_t>(r)];
        auto [it, inserted] = index_of.try_emplace(id, ids.size());
        if (inserted) {
            ids.push_back(id);
            rows_of.emplace_back();
        }
        rows_of[it->second].push_back(r);
    }
    const std::size_t n_drives = ids.size();
    if (n_drives < 3) throw ValidationError("need at least 3 drives to form 3 partitions");

    std::vector<std::size_t> order(n_drives);
    for (std::size_t i = 0; i < n_drives; ++i) order[i] = i;
    Rng rng(mix_seed(spec.seed, kSplitStream));
    for (std::size_t i = n_drives - 1; i > 0; --i) {
        const std::size_t j = rng.below(i + 1);
        std::swap(order[i], order[j]);
    }

    // Largest-remainder apportionment of drives over the three partitions.
    std::size_t counts[3];
    double remainders[3];
    std::size_t assigned = 0;
    for (int p = 0; p < 3; ++p) {
        const double exact = fractions[p] * static_cast<double>(n_drives);
        counts[p] = static_cast<std::size_t>(exact);
        remainders[p] = exact - static_cast<double>(counts[p]);
        assigned += counts[p];
    }
    while (assigned < n_drives) {
        int best = 0;
        for (int p = 1; p < 3; ++p) {
            if (remainders[p] > remainders[best]) best = p;
        }
        ++counts[best];
        remainders[best] = -1.0;
        ++assigned;
    }
    for (int p = 0; p < 3; ++p) {
        if (counts[p] == 0) {
            throw ValidationError("split would leave a partition with zero drives");
        }
    }

    SplitResult result;
    std::vector<std::string>* id_lists[3] = {&result.train_drives, &result.test_drives,
                                             &result.validation_drives};
    Dataset* parts[3] = {&result.train, &result.test, &result.validation};
    std::size_t cursor = 0;
    for (int p = 0; p < 3; ++p) {
        std::vector<int> rows;
        for (std::size_t k = 0; k < counts[p]; ++k, ++cursor) {
            const std::size_t d = order[cursor];
            id_lists[p]->push_back(ids[d]);
            rows.insert(rows.end(), rows_of[d].begin(), rows_of[d].end());
        }
        std::sort(rows.begin(), rows.end());
        *parts[p] = select_rows(data, rows);
    }
    return result;
}

std::string split_manifest_json(const SplitResult& split) {
    nlohmann::json j;
    j["train"] = split.train_drives;
    j["test"] = split.test_drives;
    j["validation"] = split.validation_drives;
    return j.dump(2);
}

DriveSet generate_synthetic(const SyntheticConfig& cfg) {
    if (cfg.n_drives < 1) throw ValidationError("generator needs at least one drive");
    if (cfg.n_on_drives < 0 || cfg.n_on_drives > cfg.n_drives) {
        throw ValidationError("on-drive count must lie in [0, n_drives]");
    }
    const int n_aug = static_cast<int>(augmented_feature_names().size());
    const int n_raw = cfg.n_features - n_aug;
    if (n_raw < 1) {
        throw ValidationError("n_features must exceed the " + std::to_string(n_aug) +
                              " augmented context features");
    }
    if (cfg.n_informative < 0 || cfg.n_informative > n_raw) {
        throw ValidationError("informative feature count exceeds raw feature count");
    }
    if (cfg.min_samples_per_drive < 1 || cfg.max_samples_per_drive < cfg.min_samples_per_drive) {
        throw ValidationError("samples-per-drive bounds invalid");
    }
    if (cfg.state_flip_prob < 0.0 || cfg.state_flip_prob > 1.0) {
        throw ValidationError("state_flip_prob must lie in [0, 1]");
    }
    if (!std::isfinite(cfg.separation)) throw ValidationError("separation must be finite");

    DriveSet set;
    set.feature_names.reserve(static_cast<std::size_t>(n_raw));
    for (int f = 0; f < n_raw; ++f) set.feature_names.push_back("f" + std::to_string(f));

    // Which drives run with the heater on: seeded shuffle, first n_on_drives.
    std::vector<int> drive_order(static_cast<std::size_t>(cfg.n_drives));
    for (int i = 0; i < cfg.n_drives; ++i) drive_order[static_cast<std::size_t>(i)] = i;
    Rng assign_rng(mix_seed(cfg.seed, kAssignStream));
    for (std::size_t i = drive_order.size() - 1; i > 0; --i) {
        const std::size_t j = assign_rng.below(i + 1);
        std::swap(drive_order[i], drive_order[j]);
    }
    std::vector<int> drive_label(static_cast<std::size_t>(cfg.n_drives), 0);
    for (int k = 0; k < cfg.n_on_drives; ++k) {
        drive_label[static_cast<std::size_t>(drive_order[static_cast<std::size_t>(k)])] = 1;
    }

    int id_width = 1;
    for (int v = cfg.n_drives - 1; v >= 10; v /= 10) ++id_width;

    set.drives.reserve(static_cast<std::size_t>(cfg.n_drives));
    for (int d = 0; d < cfg.n_drives; ++d) {
        Rng rng(mix_seed(cfg.seed, kDriveStream, static_cast<std::uint64_t>(d)));
        Drive drive;
        std::string num = std::to_string(d);
        drive.drive_id = "d" + std::string(static_cast<std::size_t>(id_width) - num.size(), '0') + num;
        const int label = drive_label[static_cast<std::size_t>(d)];
        const int n_samples = rng.uniform_int(cfg.min_samples_per_drive, cfg.max_samples_per_drive);
        // Start anywhere in a 4-week window so hour and week phases vary.
        const std::int64_t start = static_cast<std::int64_t>(rng.below(4 * kWeekSeconds));
        drive.samples.reserve(static_cast<std::size_t>(n_samples));
        for (int i = 0; i < n_samples; ++i) {
            DriveSample s;
            s.timestamp = start + 5 * static_cast<std::int64_t>(i);
            s.seat_heating = rng.bernoulli(cfg.state_flip_prob) ? 1 - label : label;
            s.features.resize(n_raw);
            for (int f = 0; f < n_raw; ++f) {
                double v = rng.normal();
                if (f < cfg.n_informative && label == 1) v += cfg.separation;
                s.features[f] = v;
            }
            drive.samples.push_back(std::move(s));
        }
        set.drives.push_back(std::move(drive));
    }
    return set;
}

} // namespace qaccel
