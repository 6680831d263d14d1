#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace qaccel {

// Input that violates an operation's preconditions.
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Problem size exceeds a configured resource cap.
struct CapacityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A decoded model has no usable parameters (e.g. no support vectors).
struct DegenerateModelError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}
} // namespace detail

// Derives an independent stream seed from a base seed and a stream tag.
// All seeded components use this instead of ad-hoc arithmetic so that
// parallel lanes (shots, restarts, repetitions) stay order-independent.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t s = seed ^ (0x632be59bd9b4e019ULL * (stream + 1));
    return detail::splitmix64_next(s);
}

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    return mix_seed(mix_seed(seed, a), b);
}

// Deterministic RNG used throughout. splitmix64 core; every draw method is
// written out explicitly so results are identical across platforms and
// standard libraries (std::*_distribution is implementation-defined).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() { return detail::splitmix64_next(state_); }

    // Uniform double in [0, 1) with 53 random bits.
    double u01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * u01(); }

    // Uniform integer in [0, n), n >= 1. Rejection sampling, no modulo bias.
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t threshold = (0 - n) % n;
        for (;;) {
            std::uint64_t r = next();
            if (r >= threshold) return r % n;
        }
    }

    int uniform_int(int lo, int hi) { // inclusive bounds
        return lo + static_cast<int>(below(static_cast<std::uint64_t>(hi - lo) + 1));
    }

    bool bernoulli(double p) { return u01() < p; }

    // Standard normal via Box-Muller; caches the second deviate.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = 1.0 - u01(); // (0, 1]
        double u2 = u01();
        double r = std::sqrt(-2.0 * std::log(u1));
        double t = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(t);
        has_spare_ = true;
        return r * std::cos(t);
    }

private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

inline constexpr double kPi = 3.14159265358979323846264338327950288;

// Stream tag for "the i-th independent item of a batch" (samples of a cost
// evaluation, circuits of a remote submission). Shared across modules so a
// batch executed remotely at zero noise reproduces the ideal per-sample
// results bit-exactly.
inline constexpr std::uint64_t kItemStream = 0x6974656d; // "item"

// Shortest round-trip decimal representation; used wherever doubles are
// serialized so identical values always produce identical bytes.
inline std::string double_repr(double value) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    (void)ec;
    return std::string(buf, ptr);
}

} // namespace qaccel
