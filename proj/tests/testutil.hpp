#pragma once

// Shared fixtures and instrumented execution backends for the test binaries.

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qaccel/backend.hpp"
#include "qaccel/dataset.hpp"

namespace testutil {

// Two gaussian point clouds with labels 0/1; rows are class 0 then class 1.
inline qaccel::Dataset make_blobs(int n_per_class, double c0x, double c0y, double c1x,
                                  double c1y, double sigma, std::uint64_t seed) {
    qaccel::Rng rng(seed);
    const int n = 2 * n_per_class;
    qaccel::Dataset d;
    d.features.resize(n, 2);
    d.labels.resize(n);
    d.feature_names = {"f0", "f1"};
    for (int i = 0; i < n; ++i) {
        const int label = i < n_per_class ? 0 : 1;
        d.features(i, 0) = (label == 0 ? c0x : c1x) + sigma * rng.normal();
        d.features(i, 1) = (label == 0 ? c0y : c1y) + sigma * rng.normal();
        d.labels(i) = label;
        d.drive_ids.push_back("b" + std::to_string(i));
    }
    return d;
}

// Default two-feature classification fixture: 40 points, well separated.
inline qaccel::Dataset blobs_fixture(std::uint64_t seed) {
    return make_blobs(20, 0.5, 0.5, 2.5, 2.5, 0.3, seed);
}

inline qaccel::Dataset from_rows(const std::vector<std::pair<std::vector<double>, int>>& rows) {
    qaccel::Dataset d;
    const int n = static_cast<int>(rows.size());
    const int k = static_cast<int>(rows.front().first.size());
    d.features.resize(n, k);
    d.labels.resize(n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < k; ++j) {
            d.features(i, j) = rows[static_cast<std::size_t>(i)].first[static_cast<std::size_t>(j)];
        }
        d.labels(i) = rows[static_cast<std::size_t>(i)].second;
        d.drive_ids.push_back("r" + std::to_string(i));
    }
    for (int j = 0; j < k; ++j) d.feature_names.push_back("f" + std::to_string(j));
    return d;
}

inline qaccel::Dataset xor_fixture() {
    return from_rows({{{0, 0}, 0}, {{0, 1}, 1}, {{1, 0}, 1}, {{1, 1}, 0}});
}

// Linearly separable by the first coordinate at 0.5.
inline qaccel::Dataset four_point_fixture() {
    return from_rows({{{0, 0}, 0}, {{0, 1}, 0}, {{1, 0}, 1}, {{1, 1}, 1}});
}

// Returns the same counts for every circuit; tracks invocations.
class FixedCountsBackend final : public qaccel::ExecutionBackend {
public:
    explicit FixedCountsBackend(qaccel::ShotCounts counts) : counts_(std::move(counts)) {}
    std::string name() const override { return "fixed_counts_stub"; }
    qaccel::ShotCounts run(const qaccel::Circuit&, int, std::uint64_t) override {
        ++calls_;
        return counts_;
    }
    int calls() const { return calls_; }

private:
    qaccel::ShotCounts counts_;
    int calls_ = 0;
};

// Ideal simulator that remembers every circuit it executed.
class RecordingBackend final : public qaccel::ExecutionBackend {
public:
    std::string name() const override { return "recording_stub"; }
    qaccel::ShotCounts run(const qaccel::Circuit& circuit, int shots,
                           std::uint64_t seed) override {
        circuits.push_back(circuit);
        return inner_.run(circuit, shots, seed);
    }
    std::vector<qaccel::Circuit> circuits;

private:
    qaccel::SimulatorIdeal inner_;
};

// Fails on one specific call index, succeeds otherwise.
class FailingBackend final : public qaccel::ExecutionBackend {
public:
    explicit FailingBackend(int fail_at) : fail_at_(fail_at) {}
    std::string name() const override { return "failing_stub"; }
    qaccel::ShotCounts run(const qaccel::Circuit& circuit, int shots,
                           std::uint64_t seed) override {
        if (calls_++ == fail_at_) throw std::runtime_error("injected backend outage");
        return inner_.run(circuit, shots, seed);
    }

private:
    int fail_at_;
    int calls_ = 0;
    qaccel::SimulatorIdeal inner_;
};

} // namespace testutil
